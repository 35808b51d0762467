#pragma once

// The logarithmic weight X(t) = -1/log(t) on (0,1) and its exact calculus
// identities. X is strictly increasing, X(t) -> 0 as t -> 0+, and blows up
// as t -> 1-. The derivative identity
//     d/dr X^b(r/D) = b X^{b+1}(r/D) / r
// and its antiderivative are the backbone of every weighted integral in
// this library.

#include <cmath>
#include <stdexcept>
#include <string>

namespace hardylab {

// Guard: callers keep D strictly above sup d, so t stays away from 1.
// Beyond 1 - 1e-12 the weight overflows double resolution of log(t).
inline constexpr double x_eval_max_t = 1.0 - 1e-12;

inline double x_eval(double t) {
    if (!(t > 0.0) || t >= 1.0)
        throw std::domain_error("x_eval: t must lie in (0,1), got t=" + std::to_string(t));
    if (t > x_eval_max_t)
        throw std::domain_error("x_eval: t=" + std::to_string(t) +
                                " too close to 1; X(t) overflows the working precision");
    return -1.0 / std::log(t);
}

// X^b(t) with the continuous extension X^b(0+) = 0 for b > 0.
inline double x_pow(double t, double b) {
    if (b == 0.0) return 1.0;
    if (t == 0.0) {
        if (b > 0.0) return 0.0;
        throw std::domain_error("x_pow: X^b(0+) diverges for b < 0");
    }
    return std::pow(x_eval(t), b);
}

// Exact value of the integral of r^{-1} X^{b+1}(r) over (s1, s2), b != 0:
//     (1/b) [X^b(s2) - X^b(s1)].
// s1 = 0 is allowed when b > 0 (X^b(0+) = 0). Serves as the quadrature
// oracle everywhere.
inline double x_power_antiderivative(double b, double s1, double s2) {
    if (b == 0.0)
        throw std::domain_error("x_power_antiderivative: beta must be nonzero");
    if (!(s1 >= 0.0) || !(s2 > s1) || !(s2 < 1.0))
        throw std::domain_error("x_power_antiderivative: need 0 <= s1 < s2 < 1");
    if (s1 == 0.0 && b <= 0.0)
        throw std::domain_error("x_power_antiderivative: s1 = 0 requires beta > 0");
    return (x_pow(s2, b) - x_pow(s1, b)) / b;
}

// Length scale wrapper: evaluates X(r/D) for a fixed D > 0.
class LogWeightScale {
public:
    explicit LogWeightScale(double D) : D_(D) {
        if (!(D > 0.0))
            throw std::domain_error("LogWeightScale: D must be positive");
    }

    double D() const { return D_; }
    double operator()(double r) const { return x_eval(r / D_); }
    double pow(double r, double b) const { return x_pow(r / D_, b); }

    // d/dr X^b(r/D) = b X^{b+1}(r/D) / r
    double pow_derivative(double r, double b) const {
        return b * x_pow(r / D_, b + 1.0) / r;
    }

private:
    double D_;
};

} // namespace hardylab
