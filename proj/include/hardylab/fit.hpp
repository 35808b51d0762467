#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace hardylab {

// Ordinary least squares y = intercept + slope x with residual-based
// half-widths (2 standard errors).
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_halfwidth = 0.0;
    double intercept_halfwidth = 0.0;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 2) throw std::invalid_argument("fit_line: need >= 2 points");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= double(n);
    my /= double(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    if (n > 2) {
        double ssr = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = y[i] - (f.intercept + f.slope * x[i]);
            ssr += e * e;
        }
        const double s2 = ssr / double(n - 2);
        f.slope_halfwidth = 2.0 * std::sqrt(s2 / sxx);
        f.intercept_halfwidth = 2.0 * std::sqrt(s2 * (1.0 / double(n) + mx * mx / sxx));
    }
    return f;
}

// Slope of log y against log x on the n_tail smallest abscissae
// (rows assumed sorted ascending in x).
inline LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y,
                          std::size_t n_tail) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_loglog: need >= 2 points");
    n_tail = std::min(n_tail, x.size());
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < n_tail; ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw std::invalid_argument("fit_loglog: positive data required");
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
    }
    return fit_line(lx, ly);
}

// Extrapolated limit of v(eps) = L + C eps^s as eps -> 0, fitted on the
// n_tail smallest eps (rows sorted ascending). The model exponent s comes
// from the caller (the sweeps know their own correction order).
struct LimitFit {
    double limit = 0.0;
    double halfwidth = 0.0;
    double correction = 0.0; // fitted C
};

inline LimitFit fit_limit(const std::vector<double>& eps, const std::vector<double>& v,
                          std::size_t n_tail, double corr_exponent) {
    if (eps.size() != v.size() || eps.size() < 2)
        throw std::invalid_argument("fit_limit: need >= 2 points");
    n_tail = std::min(n_tail, eps.size());
    std::vector<double> x, y;
    for (std::size_t i = 0; i < n_tail; ++i) {
        x.push_back(std::pow(eps[i], corr_exponent));
        y.push_back(v[i]);
    }
    auto f = fit_line(x, y);
    return {f.intercept, f.intercept_halfwidth, f.slope};
}

} // namespace hardylab
