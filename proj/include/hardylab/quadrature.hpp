#pragma once

// 1D integration of endpoint-singular integrands r^a X^beta(r/D) g(r) on
// (0, delta), and the radial reduction of N-dimensional integrals over
// distance-level sets.
//
// Strategy: integrands with a near -1 (the epsilon-degenerate family
// J_beta) are transformed exactly by r = D s^{1/(a+1)}, which maps
// r^a dr to a constant multiple of ds and X(r/D) to (a+1) X(s). The
// critical power a = -1 is handled in the variable tau = log(D/r), where
// r^{-1} X^b dr becomes tau^{-b} dtau. Everything else goes to an
// adaptive Gauss-Kronrod 7-15 scheme with panels graded toward the
// singular endpoint.

#include "hardylab/log_weight.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace hardylab {

struct IntegralResult {
    double value = 0.0;
    double error = 0.0; // absolute error estimate
    std::size_t evaluations = 0;
};

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& msg, IntegralResult best)
        : std::runtime_error(msg), best_(best) {}
    const IntegralResult& best() const { return best_; }

private:
    IntegralResult best_;
};

// r^a * X^beta(r/D) * g, with a bounded extra factor supplied either as a
// function of r alone (g) or of (r, X(r/D)) (gx). Factors that depend on
// the weight must use gx: the substituted integration domains compute
// X exactly even where r itself underflows double range.
struct WeightedIntegrand {
    double a = 0.0;
    double beta = 0.0;
    double D = 1.0;
    std::function<double(double)> g;
    std::function<double(double, double)> gx;

    // Near r = 0, r^a X^beta(r) integrates iff a > -1, or a = -1 with the
    // X power beta > 1 (the primitive of r^{-1} X^b is X^{b-1}/(b-1),
    // finite at 0+ only for b > 1).
    bool integrable_at_zero() const {
        return a > -1.0 || (a == -1.0 && beta > 1.0);
    }

    double extra(double r, double X) const {
        double v = 1.0;
        if (g) v *= g(r);
        if (gx) v *= gx(r, X);
        return v;
    }

    double operator()(double r) const {
        const double X = (beta != 0.0 || gx) ? x_eval(r / D) : 0.0;
        double v = std::pow(r, a);
        if (beta != 0.0) v *= std::pow(X, beta);
        return v * extra(r, X);
    }
};

struct QuadratureOptions {
    std::size_t max_panels = 60000;
    double abs_tol = 0.0;            // extra absolute floor for the stop test
    double eta_threshold = 0.25;     // apply the power substitution for a+1 <= this
};

namespace quad_detail {

// Gauss-Kronrod 7-15 (positive half; node 7 is the midpoint).
inline constexpr double gk_x[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
inline constexpr double gk_wk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
// 7-point Gauss weights, aligned with odd Kronrod indices 1,3,5 and the center.
inline constexpr double gk_wg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct Panel {
    double lo, hi, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gk15(const F& f, double lo, double hi) {
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);

    double fv[15];
    const double fc = f(c);
    fv[14] = fc;
    for (int i = 0; i < 7; ++i) {
        fv[2 * i] = f(c + h * gk_x[i]);
        fv[2 * i + 1] = f(c - h * gk_x[i]);
    }

    double resk = gk_wk[7] * fc;
    double resabs = std::abs(resk);
    for (int i = 0; i < 7; ++i) {
        const double s = fv[2 * i] + fv[2 * i + 1];
        resk += gk_wk[i] * s;
        resabs += gk_wk[i] * (std::abs(fv[2 * i]) + std::abs(fv[2 * i + 1]));
    }
    double resg = gk_wg[3] * fc;
    for (int i = 0; i < 3; ++i)
        resg += gk_wg[i] * (fv[2 * (2 * i + 1)] + fv[2 * (2 * i + 1) + 1]);

    const double mean = 0.5 * resk;
    double resasc = gk_wk[7] * std::abs(fc - mean);
    for (int i = 0; i < 7; ++i)
        resasc += gk_wk[i] * (std::abs(fv[2 * i] - mean) + std::abs(fv[2 * i + 1] - mean));

    resk *= h;
    resg *= h;
    resasc *= std::abs(h);
    resabs *= std::abs(h);

    double err = std::abs(resk - resg);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps_floor = 50.0 * std::numeric_limits<double>::epsilon() * resabs;
    err = std::max(err, eps_floor);
    return {lo, hi, resk, err};
}

// Adaptive refinement from a set of initial breakpoints.
template <class F>
IntegralResult adapt(const F& f, const std::vector<double>& breaks, double rel_tol,
                     double abs_tol, std::size_t max_panels) {
    std::priority_queue<Panel> heap;
    double value = 0.0, error = 0.0, l1 = 0.0;
    std::size_t evals = 0, n_panels = 0;

    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (!(breaks[i + 1] > breaks[i])) continue;
        Panel p = gk15(f, breaks[i], breaks[i + 1]);
        evals += 15;
        ++n_panels;
        value += p.value;
        error += p.error;
        l1 += std::abs(p.value);
        heap.push(p);
    }

    // Sign-changing integrands cannot meet a purely relative target when the
    // total nearly cancels; the stop test floors the scale at 1% of the
    // accumulated panel mass.
    auto done = [&] {
        const double scale = std::max(std::abs(value), 0.01 * l1);
        return error <= std::max(abs_tol, rel_tol * scale);
    };

    while (!done()) {
        if (n_panels >= max_panels || heap.empty())
            throw ConvergenceError(
                "adaptive quadrature: tolerance unreachable at max subdivision "
                "(best value " + std::to_string(value) + ", error estimate " +
                    std::to_string(error) + ")",
                {value, error, evals});
        Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(mid > worst.lo && mid < worst.hi)) {
            // not splittable in double precision; accept its estimate
            continue;
        }
        Panel left = gk15(f, worst.lo, mid);
        Panel right = gk15(f, mid, worst.hi);
        evals += 30;
        ++n_panels;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        l1 += std::abs(left.value) + std::abs(right.value) - std::abs(worst.value);
        heap.push(left);
        heap.push(right);
    }
    return {value, error, evals};
}

// Breakpoints on [lo, hi] geometrically clustered toward lo (and toward hi
// when two_sided), for endpoint-singular integrands.
inline std::vector<double> clustered_breaks(double lo, double hi, bool cluster_lo,
                                            bool cluster_hi, int levels = 36) {
    std::vector<double> pts;
    pts.push_back(lo);
    const double span = hi - lo;
    if (cluster_lo)
        for (int j = levels; j >= 1; --j) pts.push_back(lo + span * std::ldexp(1.0, -j - 1));
    pts.push_back(lo + 0.5 * span);
    if (cluster_hi)
        for (int j = 1; j <= levels; ++j) pts.push_back(hi - span * std::ldexp(1.0, -j - 1));
    pts.push_back(hi);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

} // namespace quad_detail

// Generic adaptive integration of a callable on [lo, hi].
inline IntegralResult integrate_adaptive(const std::function<double(double)>& f, double lo,
                                         double hi, double rel_tol = 1e-10,
                                         double abs_tol = 0.0,
                                         std::size_t max_panels = 60000) {
    return quad_detail::adapt(f, {lo, 0.5 * (lo + hi), hi}, rel_tol, abs_tol, max_panels);
}

// Non-adaptive composite Gauss-Kronrod on a polynomially graded grid
// r_i = upper (i/M)^gamma. Used as an independent brute-force route and for
// grid-refinement diagnostics; the error estimate is the sum of panel
// estimates.
inline IntegralResult composite_graded(const std::function<double(double)>& f, double upper,
                                       std::size_t panels, double gamma = 3.0) {
    IntegralResult out;
    double prev = 0.0;
    for (std::size_t i = 1; i <= panels; ++i) {
        const double r = upper * std::pow(double(i) / double(panels), gamma);
        auto p = quad_detail::gk15(f, prev, r);
        out.value += p.value;
        out.error += p.error;
        out.evaluations += 15;
        prev = r;
    }
    return out;
}

// Integrate f = r^a X^beta(r/D) g(r) over (lower, upper), resolving the
// endpoint singularity at 0 exactly. Relative tolerance; failure to converge
// throws ConvergenceError carrying the best value.
inline IntegralResult integrate_singular(const WeightedIntegrand& f, double lower, double upper,
                                         double rel_tol = 1e-8,
                                         const QuadratureOptions& opts = {}) {
    using namespace quad_detail;
    if (!(lower >= 0.0) || !(upper > lower))
        throw std::domain_error("integrate_singular: need 0 <= lower < upper");
    if (f.beta != 0.0 && !(upper < f.D))
        throw std::domain_error("integrate_singular: upper must stay below the X scale D");

    if (lower > 0.0) {
        auto raw = [&f](double r) { return f(r); };
        const bool steep = (f.a < 0.0 || f.beta < 0.0) && upper / lower > 100.0;
        auto breaks = clustered_breaks(lower, upper, steep, false);
        return adapt(raw, breaks, rel_tol, opts.abs_tol, opts.max_panels);
    }

    if (!f.integrable_at_zero())
        throw std::domain_error(
            "integrate_singular: r^a X^b with a=" + std::to_string(f.a) + ", b=" +
            std::to_string(f.beta) + " is not integrable near 0 (need a > -1, or a = -1 "
            "with b > 1)");

    if (f.a == -1.0) {
        // tau = log(D/r) turns r^{-1} X^b dr into tau^{-b} dtau on
        // (tau0, infinity), tau0 = log(D/upper); then sigma = tau0/tau maps
        // the tail onto (0, 1]. X(r/D) = sigma/tau0 exactly.
        const double b = f.beta;
        const double tau0 = std::log(f.D / upper);
        auto sub = [&](double sigma) {
            const double r = f.D * std::exp(-tau0 / sigma);
            return std::pow(sigma, b - 2.0) * f.extra(r, sigma / tau0);
        };
        const double scale = std::pow(tau0, 1.0 - b);
        auto breaks = clustered_breaks(0.0, 1.0, true, false);
        auto res = adapt(sub, breaks, rel_tol, opts.abs_tol / scale, opts.max_panels);
        return {scale * res.value, scale * res.error, res.evaluations};
    }

    const double eta = f.a + 1.0;
    if (eta <= opts.eta_threshold) {
        // r = D s^{1/eta}: int r^a X^b(r/D) g dr
        //   = (D^eta / eta) eta^b  int X^b(s) g(D s^{1/eta}) ds
        // over (0, (upper/D)^eta), with X(r/D) = eta X(s) exactly.
        const double b = f.beta;
        const double s_hi = std::pow(upper / f.D, eta);
        const double scale = std::pow(f.D, eta) / eta * std::pow(eta, b);
        auto sub = [&](double s) {
            const double Xs = x_eval(s);
            double v = b == 0.0 ? 1.0 : std::pow(Xs, b);
            return v * f.extra(f.D * std::pow(s, 1.0 / eta), eta * Xs);
        };
        auto breaks = clustered_breaks(0.0, s_hi, true, true);
        auto res = adapt(sub, breaks, rel_tol, opts.abs_tol / std::abs(scale), opts.max_panels);
        return {scale * res.value, std::abs(scale) * res.error, res.evaluations};
    }

    auto raw = [&f](double r) { return f(r); };
    auto breaks = clustered_breaks(0.0, upper, true, false);
    return adapt(raw, breaks, rel_tol, opts.abs_tol, opts.max_panels);
}

// ---------------------------------------------------------------------------
// Radial reduction

// Area of the unit sphere S^{n-1} in R^n (n = 1 gives 2, the two endpoints).
inline double unit_sphere_area(int n) {
    if (n < 1) throw std::domain_error("unit_sphere_area: n >= 1 required");
    return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
}

inline double ball_volume(int n, double radius) {
    return unit_sphere_area(n) / n * std::pow(radius, n);
}

// The supported model geometries for coarea reduction:
//   point:    K = {0} in R^N (k = N), level sets are spheres,
//             factor |S^{N-1}| r^{N-1};
//   affine:   K affine of codimension k with a bounded section of measure
//             |Y| in the flat directions, factor |Y| |S^{k-1}| r^{k-1};
//   interval: one-sided boundary model (k = 1), factor 1.
struct RadialGeometry {
    enum class Kind { point, affine, interval };
    Kind kind = Kind::point;
    int N = 3;
    int k = 3;
    double section_measure = 1.0;

    static RadialGeometry point(int N) { return {Kind::point, N, N, 1.0}; }
    static RadialGeometry affine(int N, int k, double section = 1.0) {
        if (k < 1 || k > N - 1)
            throw std::domain_error("RadialGeometry::affine: need 1 <= k <= N-1");
        return {Kind::affine, N, k, section};
    }
    static RadialGeometry interval() { return {Kind::interval, 1, 1, 1.0}; }

    double surface_factor() const {
        switch (kind) {
            case Kind::point: return unit_sphere_area(N);
            case Kind::affine: return unit_sphere_area(k) * section_measure;
            case Kind::interval: return 1.0;
        }
        return 0.0;
    }
};

// int_Omega f(d(x)) dx = factor * int_0^upper f(r) r^{k-1} dr for the model
// geometries. The caller supplies the profile integrand without the surface
// power; the k-1 is folded into the exact exponent so the singular treatment
// sees it.
inline IntegralResult radial_integral(const WeightedIntegrand& per_r, const RadialGeometry& geo,
                                      double lower, double upper, double rel_tol = 1e-8,
                                      const QuadratureOptions& opts = {}) {
    WeightedIntegrand full = per_r;
    full.a += geo.k - 1;
    const double factor = geo.surface_factor();
    QuadratureOptions o = opts;
    if (o.abs_tol != 0.0) o.abs_tol /= factor;
    auto res = integrate_singular(full, lower, upper, rel_tol, o);
    return {factor * res.value, factor * res.error, res.evaluations};
}

// ---------------------------------------------------------------------------
// Graded grids

// Either polynomial grading delta (i/M)^gamma or geometric clustering at 0;
// exactly one scheme per grid.
struct GradedGrid {
    enum class Scheme { polynomial, geometric };
    Scheme scheme = Scheme::polynomial;
    double delta = 1.0;
    double gamma = 3.0;   // polynomial scheme
    double r_min = 1e-8;  // geometric scheme: first node
    std::vector<double> nodes;

    static GradedGrid polynomial(double delta, std::size_t M, double gamma = 3.0) {
        if (!(delta > 0.0) || M < 2 || !(gamma >= 1.0))
            throw std::domain_error("GradedGrid::polynomial: bad parameters");
        GradedGrid g;
        g.scheme = Scheme::polynomial;
        g.delta = delta;
        g.gamma = gamma;
        g.nodes.resize(M);
        for (std::size_t i = 1; i <= M; ++i)
            g.nodes[i - 1] = delta * std::pow(double(i) / double(M), gamma);
        return g;
    }

    static GradedGrid geometric(double delta, std::size_t M, double r_min) {
        if (!(delta > 0.0) || M < 2 || !(r_min > 0.0) || !(r_min < delta))
            throw std::domain_error("GradedGrid::geometric: bad parameters");
        GradedGrid g;
        g.scheme = Scheme::geometric;
        g.delta = delta;
        g.r_min = r_min;
        g.nodes.resize(M);
        const double q = std::pow(delta / r_min, 1.0 / double(M - 1));
        for (std::size_t i = 0; i < M; ++i) g.nodes[i] = r_min * std::pow(q, double(i));
        g.nodes.back() = delta;
        return g;
    }

    std::size_t size() const { return nodes.size(); }
};

} // namespace hardylab
