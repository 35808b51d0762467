#pragma once

#include <cmath>
#include <stdexcept>

namespace hardylab {

// The tuple (p, k, N, D) with the derived exponent H = (k-p)/p. D is the
// X length scale and must stay above sup d over the working domain (checked
// at use sites, not here).
struct HardyParams {
    double p = 2.0;
    int k = 3;
    int N = 3;
    double D = M_E;

    double H() const { return (double(k) - p) / p; }
    double abs_H() const { return std::abs(H()); }
    bool degenerate() const { return double(k) == p; }

    // |(k-p)/p|^p, the sharp constant of the plain inequality
    double hardy_constant() const { return std::pow(abs_H(), p); }

    // (p-1)/(2p) |H|^{p-2}, the sharp coefficient of the X^2 remainder
    double remainder_constant() const {
        if (degenerate())
            throw std::invalid_argument("remainder_constant: undefined for p == k");
        return (p - 1.0) / (2.0 * p) * std::pow(abs_H(), p - 2.0);
    }

    // ((p-1)/p)^p, the sharp constant of the p == k substitute inequality
    double pk_constant() const { return std::pow((p - 1.0) / p, p); }

    void validate() const {
        if (!(p > 1.0)) throw std::invalid_argument("HardyParams: p > 1 required");
        if (N < 1) throw std::invalid_argument("HardyParams: N >= 1 required");
        if (k < 1 || k > N)
            throw std::invalid_argument("HardyParams: k must lie in [1, N]");
        if (!(D > 0.0)) throw std::invalid_argument("HardyParams: D > 0 required");
    }
};

} // namespace hardylab
