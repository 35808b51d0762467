#pragma once

// Independent brute-force routes used to pin expected values in tests.
// Deliberately simple and kept apart from the adaptive machinery they check.

#include <cmath>
#include <cstddef>
#include <functional>

namespace oracle {

// Composite 4-point Gauss-Legendre on a geometric grid (r_min, upper].
inline double composite_geometric(const std::function<double(double)>& f, double r_min,
                                  double upper, std::size_t panels) {
    static const double gx[2] = {0.3399810435848563, 0.8611363115940526};
    static const double gw[2] = {0.6521451548625461, 0.3478548451374538};
    const double q = std::pow(upper / r_min, 1.0 / double(panels));
    double sum = 0.0;
    double lo = r_min;
    for (std::size_t i = 0; i < panels; ++i) {
        const double hi = (i + 1 == panels) ? upper : lo * q;
        const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
        for (int j = 0; j < 2; ++j)
            sum += h * gw[j] * (f(c + h * gx[j]) + f(c - h * gx[j]));
        lo = hi;
    }
    return sum;
}

// Composite on a polynomially graded grid upper*(i/M)^gamma including the
// first panel down to 0 (integrand must be evaluable arbitrarily close to 0).
inline double composite_power_graded(const std::function<double(double)>& f, double upper,
                                     std::size_t panels, double gamma) {
    static const double gx[2] = {0.3399810435848563, 0.8611363115940526};
    static const double gw[2] = {0.6521451548625461, 0.3478548451374538};
    double sum = 0.0;
    double lo = 0.0;
    for (std::size_t i = 1; i <= panels; ++i) {
        const double hi = upper * std::pow(double(i) / double(panels), gamma);
        const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
        for (int j = 0; j < 2; ++j)
            sum += h * gw[j] * (f(c + h * gx[j]) + f(c - h * gx[j]));
        lo = hi;
    }
    return sum;
}

// Centered five-point second derivative (per axis), O(h^4).
inline double second_derivative_5pt(const std::function<double(double)>& f, double x, double h) {
    return (-f(x - 2 * h) + 16 * f(x - h) - 30 * f(x) + 16 * f(x + h) - f(x + 2 * h)) /
           (12.0 * h * h);
}

// Ordinary least squares slope of y against x.
struct SlopeFit {
    double slope;
    double intercept;
};
inline SlopeFit ols(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double den = n * sxx - sx * sx;
    return {(n * sxy - sx * sy) / den, (sy * sxx - sx * sxy) / den};
}

} // namespace oracle
