#pragma once

// Radial test functions. A profile is a function of the distance variable
// on (0, delta], either in closed form with its endpoint structure declared
// (value = smooth(r) r^{r_pow} X^{x_pow}(r/D), smooth bounded) or as values
// on a graded grid with finite-difference derivatives.

#include "hardylab/log_weight.hpp"
#include "hardylab/quadrature.hpp"
#include "hardylab/random.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hardylab {

// C^2 cut-off: 1 on [0, delta/2], 0 from delta on, monotone quintic between.
class QuinticCutoff {
public:
    explicit QuinticCutoff(double delta = 1.0) : delta_(delta) {
        if (!(delta > 0.0)) throw std::invalid_argument("QuinticCutoff: delta > 0 required");
    }

    double delta() const { return delta_; }

    double operator()(double r) const {
        if (r <= 0.5 * delta_) return 1.0;
        if (r >= delta_) return 0.0;
        const double t = (r - 0.5 * delta_) / (0.5 * delta_);
        return 1.0 - t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
    }

    double derivative(double r) const {
        if (r <= 0.5 * delta_ || r >= delta_) return 0.0;
        const double t = (r - 0.5 * delta_) / (0.5 * delta_);
        const double u = 1.0 - t;
        return -30.0 * t * t * u * u * (2.0 / delta_);
    }

private:
    double delta_;
};

struct SingularFactor {
    double r_pow = 0.0;
    double x_pow = 0.0;
    double D = 1.0;

    bool trivial() const { return r_pow == 0.0 && x_pow == 0.0; }
};

namespace profile_detail {

// Fornberg finite-difference weights for the m-th derivative at x0 from
// arbitrary nodes.
inline std::vector<double> fd_weights(double x0, const std::vector<double>& x, int m) {
    const int n = int(x.size());
    std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
    double c1 = 1.0;
    double c4 = x[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int s = mn; s >= 1; --s)
                    c[i][s] = c1 * (s * c[i - 1][s - 1] - c5 * c[i - 1][s]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int s = mn; s >= 1; --s)
                c[j][s] = (c4 * c[j][s] - s * c[j][s - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) w[i] = c[i][m];
    return w;
}

} // namespace profile_detail

class RadialProfile {
public:
    RadialProfile() = default;

    static RadialProfile closed_form(std::function<double(double)> smooth,
                                     std::function<double(double)> smooth_deriv, double delta,
                                     SingularFactor sf = {}, double support_lo = 0.0) {
        RadialProfile u;
        u.delta_ = delta;
        u.support_lo_ = support_lo;
        u.sf_ = sf;
        u.smooth_ = std::move(smooth);
        u.smooth_deriv_ = std::move(smooth_deriv);
        return u;
    }

    static RadialProfile from_grid(GradedGrid grid, std::vector<double> values) {
        if (grid.size() != values.size())
            throw std::invalid_argument("RadialProfile: grid/value size mismatch");
        RadialProfile u;
        u.delta_ = grid.delta;
        u.support_lo_ = 0.0;
        u.grid_ = std::move(grid);
        u.values_ = std::move(values);
        u.build_node_derivatives();
        return u;
    }

    double delta() const { return delta_; }
    double support_lo() const { return support_lo_; }
    const SingularFactor& singular_factor() const { return sf_; }
    bool closed_form_available() const { return bool(smooth_); }
    const GradedGrid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }

    // the bounded factor s(r); for grid-backed profiles (trivial singular
    // factor) this is the profile itself
    double smooth_part(double r) const {
        if (smooth_) return smooth_(r);
        if (sf_.trivial()) return r >= delta_ ? 0.0 : interp_value(r);
        throw std::logic_error("RadialProfile: no closed form");
    }
    double smooth_part_derivative(double r) const {
        if (smooth_deriv_) return smooth_deriv_(r);
        if (!smooth_ && sf_.trivial()) return r >= delta_ ? 0.0 : interp_derivative(r);
        throw std::logic_error("RadialProfile: no closed-form derivative");
    }

    double value(double r) const {
        if (r >= delta_) return 0.0;
        if (smooth_) {
            double v = smooth_(r);
            if (!sf_.trivial()) v *= std::pow(r, sf_.r_pow) * x_pow(r / sf_.D, sf_.x_pow);
            return v;
        }
        return interp_value(r);
    }

    // u'(r); closed form uses
    //   u' = r^{a-1} X^b(r/D) [ s' r + s (a + b X(r/D)) ].
    double derivative(double r) const {
        if (r >= delta_) return 0.0;
        if (smooth_) {
            const double s = smooth_(r);
            const double sd = smooth_deriv_ ? smooth_deriv_(r) : 0.0;
            if (sf_.trivial()) return sd;
            const double X = x_eval(r / sf_.D);
            return std::pow(r, sf_.r_pow - 1.0) * x_pow(r / sf_.D, sf_.x_pow) *
                   (sd * r + s * (sf_.r_pow + sf_.x_pow * X));
        }
        return interp_derivative(r);
    }

    std::vector<double> sample(const GradedGrid& g) const {
        std::vector<double> out(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) out[i] = value(g.nodes[i]);
        return out;
    }

    // Compact support at the outer end: grid profiles carry zeros on the
    // final 2% of nodes, closed forms vanish at delta.
    bool compactly_supported() const {
        if (smooth_) {
            return value(delta_ * (1.0 - 1e-12)) == 0.0 || smooth_(delta_) == 0.0;
        }
        const std::size_t n = values_.size();
        const std::size_t tail = std::max<std::size_t>(1, n / 50);
        for (std::size_t i = n - tail; i < n; ++i)
            if (values_[i] != 0.0) return false;
        return true;
    }

    void write_csv(std::ostream& os) const {
        os << "r,value\n";
        char buf[64];
        if (!grid_.nodes.empty()) {
            for (std::size_t i = 0; i < grid_.size(); ++i) {
                std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", grid_.nodes[i], values_[i]);
                os << buf;
            }
        } else {
            auto g = GradedGrid::polynomial(delta_, 512, 3.0);
            for (double r : g.nodes) {
                std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", r, value(r));
                os << buf;
            }
        }
    }

    static RadialProfile read_csv(std::istream& is) {
        std::string line;
        std::vector<double> rs, vs;
        while (std::getline(is, line)) {
            if (line.empty() || line[0] == 'r' || line[0] == '#') continue;
            const auto comma = line.find(',');
            if (comma == std::string::npos)
                throw std::invalid_argument("profile csv: expected two columns");
            rs.push_back(std::stod(line.substr(0, comma)));
            vs.push_back(std::stod(line.substr(comma + 1)));
        }
        if (rs.size() < 4) throw std::invalid_argument("profile csv: too few rows");
        GradedGrid g;
        g.scheme = GradedGrid::Scheme::geometric;
        g.delta = rs.back();
        g.r_min = rs.front();
        g.nodes = std::move(rs);
        return from_grid(std::move(g), std::move(vs));
    }

private:
    void build_node_derivatives() {
        const std::size_t n = grid_.size();
        node_deriv_.assign(n, 0.0);
        const int width = 5;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t lo = i >= 2 ? i - 2 : 0;
            std::size_t hi = std::min(n, lo + width);
            lo = hi >= width ? hi - width : 0;
            std::vector<double> xs(grid_.nodes.begin() + lo, grid_.nodes.begin() + hi);
            auto w = profile_detail::fd_weights(grid_.nodes[i], xs, 1);
            double d = 0.0;
            for (std::size_t j = 0; j < xs.size(); ++j) d += w[j] * values_[lo + j];
            node_deriv_[i] = d;
        }
    }

    std::size_t locate(double r) const {
        auto it = std::upper_bound(grid_.nodes.begin(), grid_.nodes.end(), r);
        if (it == grid_.nodes.begin()) return 0;
        std::size_t i = std::size_t(it - grid_.nodes.begin()) - 1;
        return std::min(i, grid_.size() - 2);
    }

    double interp_value(double r) const {
        if (grid_.nodes.empty()) throw std::logic_error("RadialProfile: empty");
        if (r <= grid_.nodes.front()) return values_.front();
        const std::size_t i = locate(r);
        const double h = grid_.nodes[i + 1] - grid_.nodes[i];
        const double t = (r - grid_.nodes[i]) / h;
        const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
        const double h10 = t * (1 - t) * (1 - t);
        const double h01 = t * t * (3 - 2 * t);
        const double h11 = t * t * (t - 1);
        return h00 * values_[i] + h10 * h * node_deriv_[i] + h01 * values_[i + 1] +
               h11 * h * node_deriv_[i + 1];
    }

    double interp_derivative(double r) const {
        if (grid_.nodes.empty()) throw std::logic_error("RadialProfile: empty");
        if (r <= grid_.nodes.front()) return 0.0;
        const std::size_t i = locate(r);
        const double h = grid_.nodes[i + 1] - grid_.nodes[i];
        const double t = (r - grid_.nodes[i]) / h;
        const double g00 = 6 * t * (t - 1) / h;
        const double g10 = (1 - t) * (1 - 3 * t);
        const double g01 = -6 * t * (t - 1) / h;
        const double g11 = t * (3 * t - 2);
        return g00 * values_[i] + g10 * node_deriv_[i] + g01 * values_[i + 1] +
               g11 * node_deriv_[i + 1];
    }

    double delta_ = 1.0;
    double support_lo_ = 0.0;
    SingularFactor sf_;
    std::function<double(double)> smooth_, smooth_deriv_;
    GradedGrid grid_;
    std::vector<double> values_;
    std::vector<double> node_deriv_;
};

// ---------------------------------------------------------------------------
// Bump families

// C^2 bump supported on [lo, hi]: quintic rise to `height` at the midpoint,
// quintic fall back to zero.
inline RadialProfile bump_profile(double lo, double hi, double height = 1.0,
                                  double delta = 1.0) {
    if (!(0.0 <= lo && lo < hi && hi <= delta))
        throw std::invalid_argument("bump_profile: need 0 <= lo < hi <= delta");
    auto S = [](double t) { return t * t * t * (10.0 + t * (-15.0 + 6.0 * t)); };
    auto Sd = [](double t) { return 30.0 * t * t * (1.0 - t) * (1.0 - t); };
    const double m = 0.5 * (lo + hi), wl = m - lo, wr = hi - m;
    auto val = [=](double r) {
        if (r <= lo || r >= hi) return 0.0;
        return r < m ? height * S((r - lo) / wl) : height * S((hi - r) / wr);
    };
    auto der = [=](double r) {
        if (r <= lo || r >= hi) return 0.0;
        return r < m ? height * Sd((r - lo) / wl) / wl : -height * Sd((hi - r) / wr) / wr;
    };
    return RadialProfile::closed_form(val, der, delta, {}, lo);
}

// Sum of 1-3 random signed bumps, compactly supported inside (0, delta).
inline RadialProfile random_bump_profile(Rng& rng, double delta = 1.0) {
    struct B {
        double lo, hi, h;
    };
    const int n = 1 + int(rng.integer() % 3);
    std::vector<B> bumps;
    for (int i = 0; i < n; ++i) {
        double a = rng.uniform(0.03, 0.85) * delta;
        double b = a + rng.uniform(0.05, 0.95) * (0.96 * delta - a);
        double h = rng.uniform(0.2, 2.0) * (rng.integer() % 2 ? 1.0 : -1.0);
        bumps.push_back({a, std::min(b, 0.96 * delta), h});
    }
    auto S = [](double t) { return t * t * t * (10.0 + t * (-15.0 + 6.0 * t)); };
    auto Sd = [](double t) { return 30.0 * t * t * (1.0 - t) * (1.0 - t); };
    double lo_all = delta;
    for (auto& b : bumps) lo_all = std::min(lo_all, b.lo);
    auto val = [=](double r) {
        double v = 0.0;
        for (const auto& b : bumps) {
            if (r <= b.lo || r >= b.hi) continue;
            const double m = 0.5 * (b.lo + b.hi);
            v += r < m ? b.h * S((r - b.lo) / (m - b.lo)) : b.h * S((b.hi - r) / (b.hi - m));
        }
        return v;
    };
    auto der = [=](double r) {
        double v = 0.0;
        for (const auto& b : bumps) {
            if (r <= b.lo || r >= b.hi) continue;
            const double m = 0.5 * (b.lo + b.hi);
            v += r < m ? b.h * Sd((r - b.lo) / (m - b.lo)) / (m - b.lo)
                       : -b.h * Sd((b.hi - r) / (b.hi - m)) / (b.hi - m);
        }
        return v;
    };
    return RadialProfile::closed_form(val, der, delta, {}, lo_all);
}

} // namespace hardylab
