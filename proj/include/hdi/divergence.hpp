#pragma once

// Divergences between nonnegative mass functions: the generalized Renyi
// (alpha-gamma) family and its symmetrized / standardized forms, the
// Kullback-Leibler pair, alpha divergence, and the beta (Bregman) family.
//
// Everything is evaluated in the log domain where powers appear, so large
// aversion parameters (|alpha| up to 128 and beyond) do not overflow.
// Parameter values within num::kLimitTol of the poles at 0 and 1 are
// routed to the closed-form limit expressions.

#include <cmath>
#include <utility>
#include <vector>

#include "hdi/error.hpp"
#include "hdi/numeric.hpp"
#include "hdi/types.hpp"

namespace hdi {

namespace detail {

struct Shares {
    std::vector<double> v;   // normalized shares
    std::vector<double> lv;  // log shares, -inf at zeros
};

inline Shares make_shares(const MassFunction& m) {
    Shares s;
    s.v = m.normalized();
    s.lv.resize(s.v.size());
    for (std::size_t j = 0; j < s.v.size(); ++j)
        s.lv[j] = s.v[j] > 0.0 ? std::log(s.v[j]) : -num::kInf;
    return s;
}

inline void require_same_length(const MassFunction& p, const MassFunction& q) {
    if (p.size() != q.size())
        throw DimensionMismatchError("mass functions must share the same number of groups");
}

inline void require_finite(const AversionParam& a) {
    if (!std::isfinite(a.alpha))
        throw InvalidParameterError("aversion parameter must be finite");
}

// log sum_j p_j^a * q_j^(1-a). Groups with zero mass in both functions
// contribute nothing; a zero mass raised to a negative exponent is a
// ZeroMassGroup error.
inline double log_power_sum(const Shares& p, const Shares& q, double a) {
    std::vector<double> t;
    t.reserve(p.v.size());
    for (std::size_t j = 0; j < p.v.size(); ++j) {
        if (p.v[j] == 0.0 && q.v[j] == 0.0) continue;
        const double e = a * p.lv[j] + (1.0 - a) * q.lv[j];
        if (std::isnan(e) || e == num::kInf)
            throw ZeroMassGroupError("group " + std::to_string(j + 1) +
                                     " has zero mass where a negative power is required");
        t.push_back(e);
    }
    return num::log_sum_exp(t);
}

// sum_j p_j^a * q_j^(1-a) in ordinary scale; may overflow to +inf.
inline double power_sum(const Shares& p, const Shares& q, double a) {
    const double ls = log_power_sum(p, q, a);
    return std::exp(ls);
}

// alpha -> 1 limit: -sum_j p_j ln(q_j/p_j), zero-p groups dropping out.
inline double mld_form(const Shares& p, const Shares& q) {
    double s = 0.0;
    for (std::size_t j = 0; j < p.v.size(); ++j) {
        if (p.v[j] == 0.0) continue;
        if (q.v[j] == 0.0)
            throw ZeroMassGroupError("group " + std::to_string(j + 1) +
                                     " has zero q-mass but positive p-mass");
        s -= p.v[j] * (q.lv[j] - p.lv[j]);
    }
    return s;
}

// alpha -> 0 limit: sum_j q_j ln(q_j/p_j), zero-q groups dropping out.
inline double ti_form(const Shares& p, const Shares& q) {
    double s = 0.0;
    for (std::size_t j = 0; j < p.v.size(); ++j) {
        if (q.v[j] == 0.0) continue;
        if (p.v[j] == 0.0)
            throw ZeroMassGroupError("group " + std::to_string(j + 1) +
                                     " has zero p-mass but positive q-mass");
        s += q.v[j] * (q.lv[j] - p.lv[j]);
    }
    return s;
}

inline double checked_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw NonFiniteError(std::string(what) + " is not finite");
    return v;
}

// KL(p||q) = sum q_j - p_j - p_j ln(q_j/p_j), valid for unnormalized masses.
inline double kl_directed(const std::vector<double>& vp, const std::vector<double>& vq) {
    double s = 0.0;
    for (std::size_t j = 0; j < vp.size(); ++j) {
        if (vp[j] == 0.0 && vq[j] == 0.0) continue;
        if (vp[j] == 0.0 || vq[j] == 0.0)
            throw ZeroMassGroupError("group " + std::to_string(j + 1) +
                                     " has zero mass; KL(p||q) requires positive masses");
        s += vq[j] - vp[j] - vp[j] * std::log(vq[j] / vp[j]);
    }
    return s;
}

// KL(q||p) = sum p_j - q_j + q_j ln(q_j/p_j); q_j = 0 is allowed.
inline double kl_reversed(const std::vector<double>& vp, const std::vector<double>& vq) {
    double s = 0.0;
    for (std::size_t j = 0; j < vp.size(); ++j) {
        if (vp[j] == 0.0 && vq[j] == 0.0) continue;
        if (vq[j] == 0.0) {
            s += vp[j];
            continue;
        }
        if (vp[j] == 0.0)
            throw ZeroMassGroupError("group " + std::to_string(j + 1) +
                                     " has zero p-mass but positive q-mass");
        s += vp[j] - vq[j] + vq[j] * std::log(vq[j] / vp[j]);
    }
    return s;
}

// Core of the generalized Renyi divergence on prepared shares.
inline double renyi_core(const Shares& p, const Shares& q, double a) {
    if (num::near(a, 1.0)) return mld_form(p, q);
    if (num::near(a, 0.0)) return ti_form(p, q);
    const double ls = log_power_sum(p, q, a);
    return checked_finite(-ls / (a * (1.0 - a)), "Renyi divergence");
}

// Core of the symmetrized Renyi divergence; exactly symmetric in (p, q)
// and about a = 1/2. The parameter is canonicalized to max(a, 1-a) so the
// symmetry holds bitwise, not just to roundoff.
inline double sym_renyi_core(const Shares& p, const Shares& q, double a) {
    if (num::near(a, 1.0) || num::near(a, 0.0))
        return 0.5 * (mld_form(p, q) + ti_form(p, q));
    const double ah = std::max(a, 1.0 - a);
    const double s1 = log_power_sum(p, q, ah);
    const double s2 = log_power_sum(p, q, 1.0 - ah);
    return checked_finite(-(s1 + s2) / (2.0 * ah * (1.0 - ah)),
                          "symmetrized Renyi divergence");
}

// Symmetrized reference-invariant GE on prepared normalized shares.
// Returns +inf when the power sums overflow (huge aversion); callers that
// need a finite value must check.
inline double ref_inv_sym_ge_core(const Shares& p, const Shares& q, double a) {
    if (num::near(a, 1.0) || num::near(a, 0.0))
        return 0.5 * (mld_form(p, q) + ti_form(p, q));
    const double ah = std::max(a, 1.0 - a);
    const double s1 = power_sum(p, q, ah);
    const double s2 = power_sum(p, q, 1.0 - ah);
    return (1.0 - 0.5 * (s1 + s2)) / (ah * (1.0 - ah));
}

// 1 - exp(-factor * value), clamped into [0, 1); maps +inf to 1.
inline double standardize(double value, double factor) {
    return std::max(0.0, -std::expm1(-factor * value));
}

}  // namespace detail

// Generalized Renyi divergence R_a(p||q): the log of the weighted power
// mean of the share ratios, scaled by 1/(a(1-a)). Invariant to rescaling
// of either argument; nonnegative for every a; zero iff q = c*p.
inline double renyi_divergence(const MassFunction& p, const MassFunction& q, AversionParam a) {
    detail::require_same_length(p, q);
    detail::require_finite(a);
    return detail::renyi_core(detail::make_shares(p), detail::make_shares(q), a.alpha);
}

// Symmetrized Renyi divergence SR_a(p, q) = (R_a + R_{1-a})/2. Symmetric
// in the two distributions and about a = 1/2; its a -> 1, 0 limit is the
// symmetrized Theil index.
inline double symmetrized_renyi(const MassFunction& p, const MassFunction& q, AversionParam a) {
    detail::require_same_length(p, q);
    detail::require_finite(a);
    return detail::sym_renyi_core(detail::make_shares(p), detail::make_shares(q), a.alpha);
}

// Atkinson index 1 - exp(-a R_a), in [0, 1); defined for a > 0.
inline double atkinson_index(const MassFunction& p, const MassFunction& q, AversionParam a) {
    detail::require_finite(a);
    if (!(a.alpha > 0.0))
        throw InvalidParameterError("Atkinson index requires alpha > 0");
    return detail::standardize(renyi_divergence(p, q, a), a.alpha);
}

// Standardized SRI: 1 - exp(-a SR_a) for a >= 1/2 and 1 - exp(-(1-a) SR_a)
// for a < 1/2, preserving the symmetry of the SRI about a = 1/2. Values
// in [0, 1). Behavior for a < 0 follows this literal piecewise rule.
inline double standardized_sri(const MassFunction& p, const MassFunction& q, AversionParam a) {
    const double sr = symmetrized_renyi(p, q, a);
    const double factor = a.alpha >= 0.5 ? a.alpha : 1.0 - a.alpha;
    return detail::standardize(sr, factor);
}

// The Kullback-Leibler pair (KL(p||q), KL(q||p)) in the general form valid
// for unnormalized mass functions. Requires strictly positive masses.
inline std::pair<double, double> kl_divergences(const MassFunction& p, const MassFunction& q) {
    detail::require_same_length(p, q);
    for (std::size_t j = 0; j < p.size(); ++j) {
        if (p[j] == 0.0)
            throw ZeroMassGroupError("group " + std::to_string(j + 1) + " has zero p-mass");
        if (q[j] == 0.0)
            throw ZeroMassGroupError("group " + std::to_string(j + 1) + " has zero q-mass");
    }
    return {detail::kl_directed(p.values(), q.values()),
            detail::kl_reversed(p.values(), q.values())};
}

// Alpha divergence D_a(p||q) for nonnegative mass functions. Positively
// homogeneous (D_a(cp||cq) = c D_a(p||q)); limits at a -> 1, 0 are the two
// KL divergences.
inline double alpha_divergence(const MassFunction& p, const MassFunction& q, AversionParam a) {
    detail::require_same_length(p, q);
    detail::require_finite(a);
    const double al = a.alpha;
    const std::vector<double>& vp = p.values();
    const std::vector<double>& vq = q.values();
    if (num::near(al, 1.0)) return detail::kl_directed(vp, vq);
    if (num::near(al, 0.0)) return detail::kl_reversed(vp, vq);

    double s = 0.0;
    for (std::size_t j = 0; j < vp.size(); ++j) {
        if (vp[j] == 0.0 && vq[j] == 0.0) continue;
        const double lp = vp[j] > 0.0 ? std::log(vp[j]) : -num::kInf;
        const double lq = vq[j] > 0.0 ? std::log(vq[j]) : -num::kInf;
        const double e = al * lp + (1.0 - al) * lq;
        if (std::isnan(e) || e == num::kInf)
            throw ZeroMassGroupError("group " + std::to_string(j + 1) +
                                     " has zero mass where a negative power is required");
        s += al * vp[j] + (1.0 - al) * vq[j] - std::exp(e);
    }
    return detail::checked_finite(s / (al * (1.0 - al)), "alpha divergence");
}

// Symmetrized GE index (D_a + D_{1-a})/2 in closed form, on raw masses.
inline double sym_ge_divergence(const MassFunction& p, const MassFunction& q, AversionParam a) {
    detail::require_same_length(p, q);
    detail::require_finite(a);
    const double al = a.alpha;
    if (num::near(al, 1.0) || num::near(al, 0.0))
        return 0.5 * (detail::kl_directed(p.values(), q.values()) +
                      detail::kl_reversed(p.values(), q.values()));
    const double d1 = alpha_divergence(p, q, a);
    const double d2 = alpha_divergence(p, q, AversionParam{1.0 - al});
    return 0.5 * (d1 + d2);
}

// Symmetrized reference-invariant GE index: the symmetrized alpha
// divergence evaluated on the normalized shares, hence invariant to
// rescaling of either argument and symmetric about a = 1/2.
inline double ref_invariant_sym_ge(const MassFunction& p, const MassFunction& q, AversionParam a) {
    detail::require_same_length(p, q);
    detail::require_finite(a);
    const double v = detail::ref_inv_sym_ge_core(detail::make_shares(p),
                                                 detail::make_shares(q), a.alpha);
    return detail::checked_finite(v, "symmetrized reference-invariant GE");
}

// Beta (Bregman) divergence B_b(p||q); limits: KL(q||p) at b -> 0 and the
// Itakura-Saito divergence at b -> 1. Requires p_j > 0.
inline double beta_divergence(const MassFunction& p, const MassFunction& q, AversionParam b) {
    detail::require_same_length(p, q);
    detail::require_finite(b);
    const double be = b.alpha;
    const std::vector<double>& vp = p.values();
    const std::vector<double>& vq = q.values();
    for (std::size_t j = 0; j < vp.size(); ++j)
        if (vp[j] == 0.0)
            throw ZeroMassGroupError("group " + std::to_string(j + 1) +
                                     " has zero p-mass; beta divergence requires p_j > 0");

    if (num::near(be, 0.0)) return detail::kl_reversed(vp, vq);
    if (num::near(be, 1.0)) {
        // Itakura-Saito: sum r - 1 - ln r.
        double s = 0.0;
        for (std::size_t j = 0; j < vp.size(); ++j) {
            if (vq[j] == 0.0)
                throw ZeroMassGroupError("group " + std::to_string(j + 1) +
                                         " has zero q-mass in the Itakura-Saito limit");
            const double r = vq[j] / vp[j];
            s += r - 1.0 - std::log(r);
        }
        return s;
    }

    double s = 0.0;
    for (std::size_t j = 0; j < vp.size(); ++j) {
        const double lp = std::log(vp[j]);
        const double r = vq[j] / vp[j];
        double rpow;
        if (vq[j] == 0.0) {
            if (be > 1.0)
                throw ZeroMassGroupError("group " + std::to_string(j + 1) +
                                         " has zero q-mass where a negative power is required");
            rpow = 0.0;
        } else {
            rpow = std::exp((1.0 - be) * (std::log(vq[j]) - lp));
        }
        s += std::exp((1.0 - be) * lp) * (be + (1.0 - be) * r - rpow);
    }
    return detail::checked_finite(s / (be * (1.0 - be)), "beta divergence");
}

// Symmetrized reference-invariant beta divergence
//   SB_b = -(1/2b) sum pbar_j^(1-b) (1 - rbar_j)(1 - rbar_j^-b),
// the average of the two directed beta divergences on normalized shares.
// b = 0 is rejected; use the KL limit instead.
inline double symmetrized_beta(const MassFunction& p, const MassFunction& q, AversionParam b) {
    detail::require_same_length(p, q);
    detail::require_finite(b);
    const double be = b.alpha;
    if (num::near(be, 0.0))
        throw InvalidParameterError("symmetrized beta divergence is undefined at beta = 0; "
                                    "its limit there is the symmetrized KL divergence");
    const detail::Shares sp = detail::make_shares(p);
    const detail::Shares sq = detail::make_shares(q);
    double s = 0.0;
    for (std::size_t j = 0; j < sp.v.size(); ++j) {
        if (sp.v[j] == 0.0 || sq.v[j] == 0.0)
            throw ZeroMassGroupError("group " + std::to_string(j + 1) +
                                     " has zero mass; symmetrized beta requires positive shares");
        const double lr = sq.lv[j] - sp.lv[j];
        const double r = std::exp(lr);
        s += std::exp((1.0 - be) * sp.lv[j]) * (1.0 - r) * (-std::expm1(-be * lr));
    }
    return detail::checked_finite(-s / (2.0 * be), "symmetrized beta divergence");
}

}  // namespace hdi
