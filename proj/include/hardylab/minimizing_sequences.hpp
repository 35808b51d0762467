#pragma once

// The explicit near-extremal families U_eps = phi(r) r^{-H+eps} X^{-theta}(r/D)
// and the scalar integrals J_beta(eps) = int phi^p d^{-k+eps p} X^{-beta} dx,
// plus the sweep experiments that certify the constants A, B, the exponent 2
// of the X^2 remainder, the degenerate p = k substitute, the weak-norm
// failure, and the Hardy-Poincare X-exponent threshold.

#include "hardylab/fit.hpp"
#include "hardylab/functionals.hpp"
#include "hardylab/params.hpp"
#include "hardylab/profile.hpp"
#include "hardylab/quadrature.hpp"

#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hardylab {

enum class MinSeqFamily {
    theorem_a,     // 1/p < theta < 2/p, p != k
    weak_norm,     // 1 < p < 2, N > p, theta in the resolved window
    degenerate_pk, // p = k, theta > (p-1)/p
};

// Resolved theta window for the weak-norm family. The window printed in the
// statement, (1/(p-1), 1/p), is empty for every p > 1; the working window is
// the one under which I[U_eps] ~ eps^{1-p theta} holds and the ratio against
// the weak norm decays: (1/p, min(2/p, 1/(p-1))).
inline std::pair<double, double> weak_norm_theta_window(double p) {
    return {1.0 / p, std::min(2.0 / p, 1.0 / (p - 1.0))};
}

struct MinSeqParams {
    HardyParams params;
    double epsilon = 1e-2;
    double theta = 0.55;
    double delta = 1.0; // cut-off radius; params.D should be >= e * delta
    MinSeqFamily family = MinSeqFamily::theorem_a;

    static MinSeqParams standard(const HardyParams& hp, double theta, double eps,
                                 MinSeqFamily fam = MinSeqFamily::theorem_a) {
        MinSeqParams m;
        m.params = hp;
        m.theta = theta;
        m.epsilon = eps;
        m.delta = hp.D / M_E;
        m.family = fam;
        return m;
    }

    void validate() const {
        params.validate();
        if (!(epsilon > 0.0))
            throw std::invalid_argument("MinSeqParams: epsilon > 0 required");
        if (!(delta > 0.0) || !(params.D > delta))
            throw std::invalid_argument("MinSeqParams: need 0 < delta < D");
        std::ostringstream err;
        const double p = params.p;
        switch (family) {
            case MinSeqFamily::theorem_a:
                if (params.degenerate()) {
                    err << "theorem-A family requires p != k (got p = k = " << p << ")";
                    throw std::invalid_argument(err.str());
                }
                if (!(theta > 1.0 / p) || !(theta < 2.0 / p)) {
                    err << "theta = " << theta << " outside the required window (1/p, 2/p) = ("
                        << 1.0 / p << ", " << 2.0 / p << ")";
                    throw std::invalid_argument(err.str());
                }
                break;
            case MinSeqFamily::weak_norm: {
                if (!(p < 2.0) || !(p > 1.0))
                    throw std::invalid_argument("weak-norm family requires 1 < p < 2");
                if (!(double(params.N) > p))
                    throw std::invalid_argument("weak-norm family requires N > p");
                auto [lo, hi] = weak_norm_theta_window(p);
                if (!(theta > lo) || !(theta < hi)) {
                    err << "theta = " << theta << " outside the resolved window (" << lo << ", "
                        << hi << ")";
                    throw std::invalid_argument(err.str());
                }
                break;
            }
            case MinSeqFamily::degenerate_pk:
                if (!params.degenerate())
                    throw std::invalid_argument("degenerate family requires p == k");
                if (!(theta > (p - 1.0) / p)) {
                    err << "theta = " << theta << " must exceed (p-1)/p = " << (p - 1.0) / p;
                    throw std::invalid_argument(err.str());
                }
                break;
        }
    }
};

// U_eps as a radial profile with analytic derivative. On [0, delta/2] the
// value is exactly r^{-H+eps} X^{-theta}(r/D).
inline RadialProfile u_epsilon(const MinSeqParams& msp) {
    msp.validate();
    const double alpha = -msp.params.H() + msp.epsilon;
    QuinticCutoff phi(msp.delta);
    SingularFactor sf{alpha, -msp.theta, msp.params.D};
    return RadialProfile::closed_form([phi](double r) { return phi(r); },
                                      [phi](double r) { return phi.derivative(r); },
                                      msp.delta, sf, 0.0);
}

// J_beta(eps) = int phi^p d^{-k+eps p} X^{-beta}(d/D) dx via radial reduction.
inline FunctionalValue j_beta(const MinSeqParams& msp, double beta, double rel_tol = 1e-10) {
    msp.validate();
    const auto& hp = msp.params;
    QuinticCutoff phi(msp.delta);
    WeightedIntegrand w;
    w.a = -double(hp.k) + msp.epsilon * hp.p;
    w.beta = -beta;
    w.D = hp.D;
    const double p = hp.p;
    w.g = [phi, p](double r) { return std::pow(phi(r), p); };
    auto r = radial_integral(w, radial_geometry_for(hp), 0.0, msp.delta, rel_tol);
    return {r.value, r.error};
}

// int |grad U_eps|^p dx - |H|^p J_{p theta}(eps), as one integral (the two
// terms share the singular prefactor d^{-k+eps p} X^{-p theta} exactly).
inline FunctionalValue lemma52_defect(const MinSeqParams& msp, double rel_tol = 1e-10) {
    msp.validate();
    const auto& hp = msp.params;
    const double alpha = -hp.H() + msp.epsilon;
    const double theta = msp.theta;
    const double p = hp.p;
    const double Hp = hp.hardy_constant();
    QuinticCutoff phi(msp.delta);
    WeightedIntegrand w;
    w.a = (alpha - 1.0) * p;
    w.beta = -theta * p;
    w.D = hp.D;
    w.gx = [phi, alpha, theta, p, Hp](double r, double X) {
        const double f = phi(r);
        const double bracket = phi.derivative(r) * r + f * (alpha - theta * X);
        return std::pow(std::abs(bracket), p) - Hp * std::pow(f, p);
    };
    auto r = radial_integral(w, radial_geometry_for(hp), 0.0, msp.delta, rel_tol);
    return {r.value, r.error};
}

// ---------------------------------------------------------------------------
// Sweep reports

struct SweepReport {
    std::string name;
    std::string sweep_variable = "epsilon";
    std::vector<std::pair<double, double>> rows; // sorted ascending in the sweep variable
    std::optional<double> fitted_exponent;
    double exponent_halfwidth = 0.0;
    std::optional<double> fitted_limit;
    double limit_halfwidth = 0.0;
    std::string notes;

    std::size_t fit_tail() const { return std::max<std::size_t>(4, rows.size() / 2); }
};

namespace minseq_detail {

inline void sort_rows(SweepReport& rep) {
    std::sort(rep.rows.begin(), rep.rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
}

inline std::vector<double> column(const SweepReport& r, bool second) {
    std::vector<double> v;
    v.reserve(r.rows.size());
    for (const auto& row : r.rows) v.push_back(second ? row.second : row.first);
    return v;
}

inline void fit_exponent(SweepReport& rep) {
    sort_rows(rep);
    auto f = fit_loglog(column(rep, false), column(rep, true), rep.fit_tail());
    rep.fitted_exponent = f.slope;
    rep.exponent_halfwidth = f.slope_halfwidth;
}

inline void fit_limit_tail(SweepReport& rep, double corr_exponent) {
    sort_rows(rep);
    auto f = fit_limit(column(rep, false), column(rep, true), rep.fit_tail(), corr_exponent);
    rep.fitted_limit = f.limit;
    rep.limit_halfwidth = f.halfwidth;
}

} // namespace minseq_detail

inline std::vector<double> default_epsilon_sweep() {
    return {1e-1, 5e-2, 2e-2, 1e-2, 5e-3, 2e-3, 1e-3};
}

// Limit sweeps whose correction decays like 1/J_beta(eps) converge too
// slowly in eps itself near the theta-window edges; they are sampled on a
// deeper grid and extrapolated against the computed 1/J instead.
inline std::vector<double> deep_epsilon_sweep() {
    return {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7};
}

namespace minseq_detail {

// v(eps) = L + A / J(eps) + o(1/J): regress the tail of v against 1/J and
// report the intercept.
inline void fit_limit_against_inverse(SweepReport& rep, const std::vector<double>& eps,
                                      const std::vector<double>& ratios,
                                      const std::vector<double>& J) {
    std::vector<std::size_t> idx(eps.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return eps[a] < eps[b]; });
    const std::size_t tail = std::max<std::size_t>(4, eps.size() / 2);
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < std::min(tail, idx.size()); ++i) {
        xs.push_back(1.0 / J[idx[i]]);
        ys.push_back(ratios[idx[i]]);
    }
    auto f = fit_line(xs, ys);
    rep.fitted_limit = f.intercept;
    rep.limit_halfwidth = f.intercept_halfwidth;
}

} // namespace minseq_detail

// ---------------------------------------------------------------------------
// Theorem A optimality sweeps (p != k)

struct SweepAReports {
    SweepReport constant;  // (i)   grad/R_0            -> |H|^p
    SweepReport exponent;  // (ii)  I/R_gamma, gamma<2  -> 0 at rate eps^{2-gamma}
    SweepReport remainder; // (iii) I/R_2               -> theta(p-1)/2 |H|^{p-2}
};

inline SweepAReports optimality_sweep_A(const HardyParams& hp, double theta, double gamma,
                                        const std::vector<double>& eps_list,
                                        double rel_tol = 1e-8) {
    if (!(gamma < 2.0) || !(gamma >= 0.0))
        throw std::invalid_argument("optimality_sweep_A: report (ii) needs 0 <= gamma < 2");
    SweepAReports out;
    out.constant.name = "sharp-constant";
    out.exponent.name = "exponent-gamma";
    out.remainder.name = "remainder-constant";
    std::vector<double> epss, ratios, r2s;
    for (double eps : eps_list) {
        auto msp = MinSeqParams::standard(hp, theta, eps, MinSeqFamily::theorem_a);
        auto u = u_epsilon(msp);
        const double grad = gradient_term(hp, u, rel_tol).value;
        const double r0 = remainder_term(hp, u, 0.0, rel_tol).value;
        const double I = hardy_functional(hp, u, rel_tol).value;
        const double rg = remainder_term(hp, u, gamma, rel_tol).value;
        const double r2 = remainder_term(hp, u, 2.0, rel_tol).value;
        out.constant.rows.emplace_back(eps, grad / r0);
        out.exponent.rows.emplace_back(eps, I / rg);
        out.remainder.rows.emplace_back(eps, I / r2);
        epss.push_back(eps);
        ratios.push_back(I / r2);
        r2s.push_back(r2);
    }
    minseq_detail::fit_limit_tail(out.constant, 2.0);
    minseq_detail::fit_exponent(out.exponent);
    minseq_detail::sort_rows(out.remainder);
    minseq_detail::fit_limit_against_inverse(out.remainder, epss, ratios, r2s);
    {
        std::ostringstream n;
        n << "target |H|^p = " << hp.hardy_constant();
        out.constant.notes = n.str();
    }
    {
        std::ostringstream n;
        n << "target exponent 2 - gamma = " << 2.0 - gamma;
        out.exponent.notes = n.str();
    }
    {
        std::ostringstream n;
        n << "upper bound theta(p-1)/2 |H|^{p-2} = "
          << theta * (hp.p - 1.0) / 2.0 * std::pow(hp.abs_H(), hp.p - 2.0)
          << "; sharp constant (p-1)/(2p)|H|^{p-2} = " << hp.remainder_constant();
        out.remainder.notes = n.str();
    }
    return out;
}

// ---------------------------------------------------------------------------
// Degenerate case p = k (Theorems 4.2 / 5.2)

// ratio int |grad U_eps|^p dx / int (U_eps^p/d^p) X^p(d/D) dx
inline SweepReport optimality_sweep_pk(const HardyParams& hp, double theta,
                                       const std::vector<double>& eps_list,
                                       double rel_tol = 1e-8) {
    if (!hp.degenerate())
        throw std::invalid_argument("optimality_sweep_pk: requires p == k");
    SweepReport rep;
    rep.name = "pk-constant";
    std::vector<double> epss, ratios, rps;
    for (double eps : eps_list) {
        auto msp = MinSeqParams::standard(hp, theta, eps, MinSeqFamily::degenerate_pk);
        auto u = u_epsilon(msp);
        const double grad = gradient_term(hp, u, rel_tol).value;
        const double rp = remainder_term(hp, u, hp.p, rel_tol).value;
        rep.rows.emplace_back(eps, grad / rp);
        epss.push_back(eps);
        ratios.push_back(grad / rp);
        rps.push_back(rp);
    }
    minseq_detail::sort_rows(rep);
    minseq_detail::fit_limit_against_inverse(rep, epss, ratios, rps);
    std::ostringstream n;
    n << "target ((p-1)/p)^p = " << hp.pk_constant();
    rep.notes = n.str();
    return rep;
}

// gamma-probe below p: ratio -> 0 at rate eps^{p-gamma}
inline SweepReport pk_gamma_probe(const HardyParams& hp, double theta, double gamma,
                                  const std::vector<double>& eps_list,
                                  double rel_tol = 1e-8) {
    if (!hp.degenerate())
        throw std::invalid_argument("pk_gamma_probe: requires p == k");
    if (!(gamma < hp.p))
        throw std::invalid_argument("pk_gamma_probe: probe exponent must be below p");
    SweepReport rep;
    rep.name = "pk-gamma-probe";
    for (double eps : eps_list) {
        auto msp = MinSeqParams::standard(hp, theta, eps, MinSeqFamily::degenerate_pk);
        auto u = u_epsilon(msp);
        const double grad = gradient_term(hp, u, rel_tol).value;
        const double rg = remainder_term(hp, u, gamma, rel_tol).value;
        rep.rows.emplace_back(eps, grad / rg);
    }
    minseq_detail::fit_exponent(rep);
    std::ostringstream n;
    n << "target decay exponent p - gamma = " << hp.p - gamma;
    rep.notes = n.str();
    return rep;
}

// ---------------------------------------------------------------------------
// Weak-norm failure (Prop 6.3)

enum class ThetaWindowMode {
    as_written, // (1/(p-1), 1/p): empty for every p > 1; always a parameter error
    resolved,   // (1/p, min(2/p, 1/(p-1)))
};

struct WeakNormFailureReports {
    SweepReport ratio;       // I / weak norm -> 0, exponent 1 - p theta + theta
    SweepReport numerator;   // I[U_eps], exponent 1 - p theta
    SweepReport denominator; // weak norm, exponent -theta
};

inline WeakNormFailureReports weak_norm_failure(const HardyParams& hp, double theta,
                                                const std::vector<double>& eps_list,
                                                ThetaWindowMode mode = ThetaWindowMode::resolved,
                                                double rel_tol = 1e-8) {
    if (mode == ThetaWindowMode::as_written) {
        std::ostringstream err;
        err << "weak_norm_failure: the window (1/(p-1), 1/p) = (" << 1.0 / (hp.p - 1.0) << ", "
            << 1.0 / hp.p << ") is empty for p = " << hp.p
            << "; use the resolved window mode (see weak_norm_theta_window)";
        throw std::invalid_argument(err.str());
    }
    const double q = double(hp.N) * hp.p / (double(hp.N) - hp.p);
    WeakNormFailureReports out;
    out.ratio.name = "weak-norm-ratio";
    out.numerator.name = "hardy-deficit";
    out.denominator.name = "weak-norm";
    for (double eps : eps_list) {
        auto msp = MinSeqParams::standard(hp, theta, eps, MinSeqFamily::weak_norm);
        auto u = u_epsilon(msp);
        const double I = hardy_functional(hp, u, rel_tol).value;
        const double w = weak_lq_norm(u, q, hp).value;
        out.numerator.rows.emplace_back(eps, I);
        out.denominator.rows.emplace_back(eps, w);
        out.ratio.rows.emplace_back(eps, I / w);
    }
    minseq_detail::fit_exponent(out.ratio);
    minseq_detail::fit_exponent(out.numerator);
    minseq_detail::fit_exponent(out.denominator);
    std::ostringstream n;
    n << "target exponents: ratio " << 1.0 - hp.p * theta + theta << ", numerator "
      << 1.0 - hp.p * theta << ", denominator " << -theta << " (q = " << q << ")";
    out.ratio.notes = n.str();
    return out;
}

// ---------------------------------------------------------------------------
// Hardy-Poincare X-exponent probe (Theorem B part 2)

struct HpOptimalityReport {
    SweepReport ratio; // I / (rhs)^{p/q}
    double expected_exponent = 0.0;
    bool failure_certified = false; // ratio -> 0: no constant c > 0 can work
};

inline HpOptimalityReport hp_optimality(const HardyParams& hp, double q, double beta,
                                        double theta, const std::vector<double>& eps_list,
                                        double margin = 0.1, double rel_tol = 1e-8) {
    if (!(q >= 1.0) || !(q < hp.p))
        throw std::invalid_argument("hp_optimality: Theorem B requires 1 <= q < p");
    HpOptimalityReport out;
    out.ratio.name = "hp-ratio";
    for (double eps : eps_list) {
        auto msp = MinSeqParams::standard(hp, theta, eps, MinSeqFamily::theorem_a);
        auto u = u_epsilon(msp);
        const double I = hardy_functional(hp, u, rel_tol).value;
        const double rhs = hardy_poincare_rhs(hp, u, q, beta, rel_tol).value;
        out.ratio.rows.emplace_back(eps, I / rhs);
    }
    minseq_detail::fit_exponent(out.ratio);
    out.expected_exponent =
        (1.0 - hp.p * theta) - (hp.p / q) * (beta - theta * q - 1.0);
    // a positive decay exponent means the ratio vanishes as eps -> 0, i.e.
    // no positive constant survives: the inequality fails for this beta
    out.failure_certified = *out.ratio.fitted_exponent > margin;
    std::ostringstream n;
    n << "expected exponent " << out.expected_exponent << "; beta threshold 1 + q/p = "
      << 1.0 + q / hp.p;
    out.ratio.notes = n.str();
    return out;
}

} // namespace hardylab
