#pragma once

// Between-group indices evaluated on grouped summaries (sizes n_j, means
// ybar_j). The Renyi and symmetrized-Renyi families use closed forms in
// terms of n_j and ybar_j, with dedicated limit expressions near the
// parameter poles; the remaining families are evaluated by building the
// weighting and disease-share mass functions explicitly.

#include <cmath>
#include <string>
#include <vector>

#include "hdi/divergence.hpp"
#include "hdi/error.hpp"
#include "hdi/numeric.hpp"
#include "hdi/types.hpp"

namespace hdi {

namespace detail {

inline void require_positive_means(const GroupedSummary& g, const char* context) {
    for (std::size_t j = 0; j < g.group_count(); ++j)
        if (g.means()[j] == 0.0)
            throw ZeroMeanGroupError("group '" + g.labels()[j] + "' has zero mean; " +
                                     context + " requires positive group means");
}

// log sum_j n_j * ybar_j^e with the max-shift trick; zero means are only
// admissible for e > 0, where the term vanishes.
inline double log_size_power_sum(const GroupedSummary& g, double e) {
    std::vector<double> t;
    t.reserve(g.group_count());
    for (std::size_t j = 0; j < g.group_count(); ++j) {
        const double y = g.means()[j];
        if (y == 0.0) {
            if (e <= 0.0)
                throw ZeroMeanGroupError("group '" + g.labels()[j] +
                                         "' has zero mean where a nonpositive power is required");
            continue;
        }
        t.push_back(std::log(g.sizes()[j]) + e * std::log(y));
    }
    return num::log_sum_exp(t);
}

// log sum_j ybar_j^e (equally-weighted scheme), same zero policy.
inline double log_power_sum_means(const GroupedSummary& g, double e) {
    std::vector<double> t;
    t.reserve(g.group_count());
    for (std::size_t j = 0; j < g.group_count(); ++j) {
        const double y = g.means()[j];
        if (y == 0.0) {
            if (e <= 0.0)
                throw ZeroMeanGroupError("group '" + g.labels()[j] +
                                         "' has zero mean where a nonpositive power is required");
            continue;
        }
        t.push_back(e * std::log(y));
    }
    return num::log_sum_exp(t);
}

inline void require_positive_total(const GroupedSummary& g) {
    if (!(g.overall_mean() > 0.0))
        throw ZeroMeanGroupError("all group means are zero");
}

// Population-weighted between-group Renyi index.
inline double pw_renyi(const GroupedSummary& g, double a) {
    require_positive_total(g);
    const double n = g.total_size();
    const double ybar = g.overall_mean();
    if (num::near(a, 1.0)) {
        // MLD: -(1/n) sum n_j ln ybar_j + ln ybar
        require_positive_means(g, "the MLD limit");
        double s = 0.0;
        for (std::size_t j = 0; j < g.group_count(); ++j)
            s += g.sizes()[j] * std::log(g.means()[j]);
        return -s / n + std::log(ybar);
    }
    if (num::near(a, 0.0)) {
        // TI: (1/(n ybar)) sum n_j ybar_j ln ybar_j - ln ybar
        double s = 0.0;
        for (std::size_t j = 0; j < g.group_count(); ++j) {
            const double y = g.means()[j];
            if (y > 0.0) s += g.sizes()[j] * y * std::log(y);
        }
        return s / (n * ybar) - std::log(ybar);
    }
    const double ls = log_size_power_sum(g, 1.0 - a);
    const double v = (a * std::log(n) + (1.0 - a) * std::log(n * ybar) - ls) /
                     (a * (1.0 - a));
    return checked_finite(v, "between-group Renyi index");
}

// Population-weighted between-group symmetrized Renyi index.
inline double pw_sri(const GroupedSummary& g, double a) {
    require_positive_total(g);
    const double n = g.total_size();
    const double ybar = g.overall_mean();
    if (num::near(a, 1.0) || num::near(a, 0.0)) {
        // STI: (1/(2 n ybar)) sum n_j (ybar_j - ybar) ln ybar_j
        require_positive_means(g, "the STI limit");
        double s = 0.0;
        for (std::size_t j = 0; j < g.group_count(); ++j)
            s += g.sizes()[j] * (g.means()[j] - ybar) * std::log(g.means()[j]);
        return s / (2.0 * n * ybar);
    }
    const double ah = std::max(a, 1.0 - a);  // bitwise symmetry about 1/2
    const double ls1 = log_size_power_sum(g, 1.0 - ah);
    const double ls2 = log_size_power_sum(g, ah);
    const double v = (std::log(n) + std::log(n * ybar) - ls1 - ls2) /
                     (2.0 * ah * (1.0 - ah));
    return checked_finite(v, "between-group symmetrized Renyi index");
}

// Equally-weighted between-group Renyi index.
inline double ew_renyi(const GroupedSummary& g, double a) {
    require_positive_total(g);
    const double m = static_cast<double>(g.group_count());
    double sum_y = 0.0;
    for (double y : g.means()) sum_y += y;
    if (num::near(a, 1.0)) {
        require_positive_means(g, "the MLD limit");
        double s = 0.0;
        for (double y : g.means()) s += std::log(y);
        return -s / m + std::log(sum_y / m);
    }
    if (num::near(a, 0.0)) {
        double s = 0.0;
        for (double y : g.means())
            if (y > 0.0) s += y * std::log(y);
        return s / sum_y - std::log(sum_y / m);
    }
    const double ls = log_power_sum_means(g, 1.0 - a);
    const double v = (a * std::log(m) + (1.0 - a) * std::log(sum_y) - ls) /
                     (a * (1.0 - a));
    return checked_finite(v, "between-group Renyi index");
}

// Equally-weighted between-group symmetrized Renyi index.
inline double ew_sri(const GroupedSummary& g, double a) {
    require_positive_total(g);
    const double m = static_cast<double>(g.group_count());
    double sum_y = 0.0;
    for (double y : g.means()) sum_y += y;
    if (num::near(a, 1.0) || num::near(a, 0.0)) {
        require_positive_means(g, "the STI limit");
        double s = 0.0;
        for (double y : g.means()) s += (y - sum_y / m) * std::log(y);
        return s / (2.0 * sum_y);
    }
    const double ah = std::max(a, 1.0 - a);
    const double ls1 = log_power_sum_means(g, 1.0 - ah);
    const double ls2 = log_power_sum_means(g, ah);
    const double v = (std::log(m) + std::log(sum_y) - ls1 - ls2) /
                     (2.0 * ah * (1.0 - ah));
    return checked_finite(v, "between-group symmetrized Renyi index");
}

inline double renyi_closed(const GroupedSummary& g, WeightingScheme w, double a) {
    return w == WeightingScheme::PopulationWeighted ? pw_renyi(g, a) : ew_renyi(g, a);
}

inline double sri_closed(const GroupedSummary& g, WeightingScheme w, double a) {
    return w == WeightingScheme::PopulationWeighted ? pw_sri(g, a) : ew_sri(g, a);
}

}  // namespace detail

// Group-weight and disease-share mass functions for the generic divergence
// path: p_j per scheme and q_j = p_j * ybar_j / reference.
struct BetweenGroupMasses {
    MassFunction p;
    MassFunction q;
};

inline BetweenGroupMasses between_group_masses(const GroupedSummary& g, WeightingScheme w,
                                               const ReferenceSpec& ref) {
    const double t = resolve_reference(g, ref).value;
    if (!(t > 0.0))
        throw ZeroMeanGroupError("disparity reference value is zero");
    const std::size_t m = g.group_count();
    std::vector<double> p(m), q(m);
    for (std::size_t j = 0; j < m; ++j) {
        p[j] = w == WeightingScheme::PopulationWeighted
                   ? g.sizes()[j] / g.total_size()
                   : 1.0 / static_cast<double>(m);
        q[j] = p[j] * g.means()[j] / t;
    }
    return {MassFunction(std::move(p)), MassFunction(std::move(q))};
}

// Between-group index for any family. The reference enters only the
// families that are not reference-invariant (GE, symmetrized GE, beta).
inline double between_group_index(const GroupedSummary& g, WeightingScheme w, IndexFamily f,
                                  AversionParam a,
                                  const ReferenceSpec& ref = ReferenceSpec::population_average()) {
    if (!std::isfinite(a.alpha))
        throw InvalidParameterError("aversion parameter must be finite");
    switch (f) {
        case IndexFamily::Renyi:
            return detail::renyi_closed(g, w, a.alpha);
        case IndexFamily::SymmetrizedRenyi:
            return detail::sri_closed(g, w, a.alpha);
        case IndexFamily::Atkinson:
            if (!(a.alpha > 0.0))
                throw InvalidParameterError("Atkinson index requires alpha > 0");
            return detail::standardize(detail::renyi_closed(g, w, a.alpha), a.alpha);
        case IndexFamily::StandardizedSRI: {
            const double sr = detail::sri_closed(g, w, a.alpha);
            const double factor = a.alpha >= 0.5 ? a.alpha : 1.0 - a.alpha;
            return detail::standardize(sr, factor);
        }
        case IndexFamily::GeneralizedEntropy: {
            const auto mf = between_group_masses(g, w, ref);
            return alpha_divergence(mf.p, mf.q, a);
        }
        case IndexFamily::SymmetrizedGE: {
            const auto mf = between_group_masses(g, w, ref);
            return sym_ge_divergence(mf.p, mf.q, a);
        }
        case IndexFamily::RefInvariantSymGE: {
            const auto mf = between_group_masses(g, w, ref);
            return ref_invariant_sym_ge(mf.p, mf.q, a);
        }
        case IndexFamily::Beta: {
            const auto mf = between_group_masses(g, w, ref);
            return beta_divergence(mf.p, mf.q, a);
        }
        case IndexFamily::SymmetrizedBeta: {
            const auto mf = between_group_masses(g, w, ref);
            return symmetrized_beta(mf.p, mf.q, a);
        }
    }
    throw InvalidParameterError("unknown index family");
}

}  // namespace hdi
