#pragma once

// Taylor-linearization variance for the between-group Renyi family: the
// index is a smooth function of the sufficient statistics U_{0,k} and
// U_{1,k}, so each record contributes a score
//   sigma_i = w_i * (d/dU_{0,k} + y_i * d/dU_{1,k}),   k = group of i,
// and the index variance is the design-based variance of the score total
// under the stratified with-replacement first-stage approximation.

#include <cmath>
#include <vector>

#include "hdi/between_group.hpp"
#include "hdi/error.hpp"
#include "hdi/numeric.hpp"
#include "hdi/survey.hpp"
#include "hdi/types.hpp"

namespace hdi {

struct LinearizationPartials {
    std::vector<double> g0;  // d index / d U_{0,k}
    std::vector<double> g1;  // d index / d U_{1,k}
};

namespace detail {

inline void require_positive_group_means(const SufficientStats& st) {
    for (std::size_t j = 0; j < st.u0.size(); ++j)
        if (!(st.u1[j] > 0.0))
            throw ZeroMeanGroupError("group '" + st.labels[j] +
                                     "' has zero mean; linearization requires positive means");
}

// Partials of the population-weighted between-group Renyi index.
inline LinearizationPartials pw_renyi_partials(const SufficientStats& st, double a) {
    const std::size_t m = st.u0.size();
    const double n = st.total_size();
    const double ybar = st.overall_mean();
    std::vector<double> y(m);
    for (std::size_t j = 0; j < m; ++j) y[j] = st.u1[j] / st.u0[j];

    LinearizationPartials out;
    out.g0.resize(m);
    out.g1.resize(m);

    if (num::near(a, 1.0)) {
        double L = 0.0;  // sum n_j ln y_j
        for (std::size_t j = 0; j < m; ++j) L += st.u0[j] * std::log(y[j]);
        for (std::size_t k = 0; k < m; ++k) {
            out.g0[k] = (L - n * std::log(y[k])) / (n * n);
            out.g1[k] = (1.0 - ybar / y[k]) / (n * ybar);
        }
        return out;
    }
    if (num::near(a, 0.0)) {
        double M = 0.0;  // sum n_j y_j ln y_j
        for (std::size_t j = 0; j < m; ++j) M += st.u0[j] * y[j] * std::log(y[j]);
        const double tot = n * ybar;
        for (std::size_t k = 0; k < m; ++k) {
            out.g0[k] = (1.0 - y[k] / ybar) / n;
            out.g1[k] = -(M - tot * std::log(y[k])) / (tot * tot);
        }
        return out;
    }

    // log T with T = sum n_j y_j^(1-a)
    std::vector<double> t(m);
    for (std::size_t j = 0; j < m; ++j)
        t[j] = std::log(st.u0[j]) + (1.0 - a) * std::log(y[j]);
    const double logT = num::log_sum_exp(t);
    for (std::size_t k = 0; k < m; ++k) {
        const double ly = std::log(y[k]);
        out.g0[k] = (1.0 / n - std::exp((1.0 - a) * ly - logT)) / (1.0 - a);
        out.g1[k] = (1.0 / (n * ybar) - std::exp(-a * ly - logT)) / a;
    }
    return out;
}

// Partials of the equally-weighted between-group Renyi index.
inline LinearizationPartials ew_renyi_partials(const SufficientStats& st, double a) {
    const std::size_t m = st.u0.size();
    const double md = static_cast<double>(m);
    std::vector<double> y(m);
    double sum_y = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        y[j] = st.u1[j] / st.u0[j];
        sum_y += y[j];
    }

    LinearizationPartials out;
    out.g0.resize(m);
    out.g1.resize(m);

    if (num::near(a, 0.0)) {
        double wl = 0.0;  // sum y_j ln y_j
        for (std::size_t j = 0; j < m; ++j) wl += y[j] * std::log(y[j]);
        for (std::size_t k = 0; k < m; ++k) {
            const double bracket = std::log(y[k]) - wl / sum_y;
            out.g0[k] = -y[k] * bracket / (st.u0[k] * sum_y);
            out.g1[k] = bracket / (st.u0[k] * sum_y);
        }
        return out;
    }

    double bracket_at = 0.0;
    std::vector<double> bracket(m);
    if (num::near(a, 1.0)) {
        for (std::size_t k = 0; k < m; ++k) bracket[k] = y[k] / sum_y - 1.0 / md;
        bracket_at = 1.0;
    } else {
        std::vector<double> t(m);
        for (std::size_t j = 0; j < m; ++j) t[j] = (1.0 - a) * std::log(y[j]);
        const double logT = num::log_sum_exp(t);
        for (std::size_t k = 0; k < m; ++k)
            bracket[k] = y[k] / sum_y - std::exp((1.0 - a) * std::log(y[k]) - logT);
        bracket_at = a;
    }
    for (std::size_t k = 0; k < m; ++k) {
        out.g0[k] = -bracket[k] / (bracket_at * st.u0[k]);
        out.g1[k] = bracket[k] / (bracket_at * st.u0[k] * y[k]);
    }
    return out;
}

inline LinearizationPartials renyi_partials(const SufficientStats& st, WeightingScheme w,
                                            double a) {
    return w == WeightingScheme::PopulationWeighted ? pw_renyi_partials(st, a)
                                                    : ew_renyi_partials(st, a);
}

}  // namespace detail

// Partial derivatives of the requested between-group index with respect
// to the sufficient statistics. Supported families: Renyi, symmetrized
// Renyi, and their standardized transforms (chain rule).
inline LinearizationPartials linearization_partials(const SufficientStats& st, WeightingScheme w,
                                                    IndexFamily f, AversionParam a) {
    if (!std::isfinite(a.alpha))
        throw InvalidParameterError("aversion parameter must be finite");
    detail::require_positive_group_means(st);
    const GroupedSummary g = st.to_grouped_summary();

    switch (f) {
        case IndexFamily::Renyi:
            return detail::renyi_partials(st, w, a.alpha);
        case IndexFamily::SymmetrizedRenyi: {
            const auto pa = detail::renyi_partials(st, w, a.alpha);
            const auto pb = detail::renyi_partials(st, w, 1.0 - a.alpha);
            LinearizationPartials out = pa;
            for (std::size_t k = 0; k < out.g0.size(); ++k) {
                out.g0[k] = 0.5 * (pa.g0[k] + pb.g0[k]);
                out.g1[k] = 0.5 * (pa.g1[k] + pb.g1[k]);
            }
            return out;
        }
        case IndexFamily::Atkinson: {
            if (!(a.alpha > 0.0))
                throw InvalidParameterError("Atkinson index requires alpha > 0");
            auto out = detail::renyi_partials(st, w, a.alpha);
            const double ri = detail::renyi_closed(g, w, a.alpha);
            const double factor = a.alpha * std::exp(-a.alpha * ri);
            for (std::size_t k = 0; k < out.g0.size(); ++k) {
                out.g0[k] *= factor;
                out.g1[k] *= factor;
            }
            return out;
        }
        case IndexFamily::StandardizedSRI: {
            auto out = linearization_partials(st, w, IndexFamily::SymmetrizedRenyi, a);
            const double sr = detail::sri_closed(g, w, a.alpha);
            const double aeff = a.alpha >= 0.5 ? a.alpha : 1.0 - a.alpha;
            const double factor = aeff * std::exp(-aeff * sr);
            for (std::size_t k = 0; k < out.g0.size(); ++k) {
                out.g0[k] *= factor;
                out.g1[k] *= factor;
            }
            return out;
        }
        default:
            throw InvalidParameterError(
                "Taylor linearization is available for the Renyi-family indices only; "
                "use the replication methods for other families");
    }
}

// Per-record linearization scores, in dataset record order.
inline std::vector<double> linearization_scores(const SurveyDataset& d, WeightingScheme w,
                                                IndexFamily f, AversionParam a) {
    const DesignTable table(d);
    const SufficientStats st = table.stats();
    const LinearizationPartials p = linearization_partials(st, w, f, a);
    std::vector<double> scores;
    scores.reserve(d.records().size());
    for (std::size_t i = 0; i < d.records().size(); ++i) {
        const SurveyRecord& r = d.records()[i];
        const std::size_t k = table.record_group(i);
        scores.push_back(r.weight * (p.g0[k] + r.outcome * p.g1[k]));
    }
    return scores;
}

struct TaylorOptions {
    // Merge each 1-PSU stratum with its neighbor (in sorted stratum
    // order) instead of failing. Off by default: treating singletons as
    // certainty units biases SEs downward.
    bool collapse_singleton_strata = false;
};

// Design-based SE of the index via the variance of the weighted score
// total: V = sum_s C_s/(C_s-1) sum_c (z_cs - zbar_s)^2 over PSU score
// totals z_cs.
inline VarianceEstimate taylor_se(const SurveyDataset& d, WeightingScheme w, IndexFamily f,
                                  AversionParam a, const TaylorOptions& opt = {}) {
    const DesignTable table(d);
    const SufficientStats st = table.stats();
    const LinearizationPartials p = linearization_partials(st, w, f, a);
    const std::size_t m = table.group_count();

    // PSU totals of the scores, from the aggregated cells.
    std::vector<double> z(table.psu_count_total(), 0.0);
    for (std::size_t row = 0; row < z.size(); ++row)
        for (std::size_t j = 0; j < m; ++j)
            z[row] += p.g0[j] * table.cell_w(row, j) + p.g1[j] * table.cell_wy(row, j);

    // Group strata for variance; singletons either fail or collapse.
    std::vector<std::vector<std::size_t>> groups;  // lists of stratum ids
    bool pending = false;
    for (std::size_t s = 0; s < table.strata_count(); ++s) {
        if (table.psu_count(s) < 2 && !opt.collapse_singleton_strata)
            throw SingletonStratumError("stratum '" + table.strata()[s] +
                                        "' has a single PSU; variance estimation needs >= 2 "
                                        "(or enable collapsing)");
        if (pending) {
            groups.back().push_back(s);
        } else {
            groups.push_back({s});
        }
        std::size_t total = 0;
        for (std::size_t g : groups.back()) total += table.psu_count(g);
        pending = total < 2;
    }
    if (pending) {
        if (groups.size() < 2)
            throw SingletonStratumError("design has fewer than 2 PSUs in total");
        auto last = groups.back();
        groups.pop_back();
        for (std::size_t s : last) groups.back().push_back(s);
    }

    double variance = 0.0;
    for (const auto& grp : groups) {
        std::vector<double> zg;
        for (std::size_t s : grp)
            for (std::size_t c = 0; c < table.psu_count(s); ++c)
                zg.push_back(z[table.psu_row(s, c)]);
        const double cs = static_cast<double>(zg.size());
        double mean = 0.0;
        for (double v : zg) mean += v;
        mean /= cs;
        double ss = 0.0;
        for (double v : zg) ss += (v - mean) * (v - mean);
        variance += cs / (cs - 1.0) * ss;
    }

    VarianceEstimate est;
    est.point = between_group_index(st.to_grouped_summary(), w, f, a);
    est.se = std::sqrt(variance);
    est.method = VarianceMethod::TaylorLinearization;
    return est;
}

}  // namespace hdi
