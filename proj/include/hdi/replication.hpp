#pragma once

// Replicate-weight variance estimation: balanced repeated replication on
// 2-PSU-per-stratum designs (half-samples balanced by a Hadamard matrix,
// optional Fay coefficient) and the Rao-Wu rescaled bootstrap, plus the
// "no disparities" null simulation. All replicate draws are deterministic
// functions of (data, config, seed): each (replicate, stratum) pair gets
// an independently derived RNG stream.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "hdi/between_group.hpp"
#include "hdi/error.hpp"
#include "hdi/rng.hpp"
#include "hdi/survey.hpp"
#include "hdi/types.hpp"

namespace hdi {

namespace detail {

inline bool is_prime(std::size_t n) {
    if (n < 2) return false;
    for (std::size_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

using HadamardMatrix = std::vector<std::vector<int>>;

// Legendre symbol chi(x) for prime q: 0 at 0, +1 for quadratic residues.
inline std::vector<int> legendre_table(std::size_t q) {
    std::vector<int> chi(q, -1);
    chi[0] = 0;
    for (std::size_t x = 1; x < q; ++x) chi[x * x % q] = 1;
    return chi;
}

inline bool hadamard_constructible(std::size_t n) {
    if (n == 1 || n == 2) return true;
    if (n % 4 != 0) return false;
    if (is_prime(n - 1) && (n - 1) % 4 == 3) return true;
    if (n % 2 == 0 && n / 2 >= 2 && is_prime(n / 2 - 1) && (n / 2 - 1) % 4 == 1) return true;
    return n % 2 == 0 && hadamard_constructible(n / 2);
}

inline HadamardMatrix hadamard_matrix(std::size_t n) {
    if (n == 1) return {{1}};
    if (n == 2) return {{1, 1}, {1, -1}};
    if (n % 4 != 0)
        throw HadamardUnavailableError("Hadamard order must be 1, 2, or a multiple of 4");

    // Paley I: q = n-1 prime, q = 3 (mod 4). H = I + S with skew
    // S = [[0, e^T], [-e, Q]] built from the Legendre symbol.
    if (is_prime(n - 1) && (n - 1) % 4 == 3) {
        const std::size_t q = n - 1;
        const std::vector<int> chi = legendre_table(q);
        HadamardMatrix h(n, std::vector<int>(n, 0));
        h[0][0] = 1;
        for (std::size_t j = 1; j < n; ++j) {
            h[0][j] = 1;
            h[j][0] = -1;
        }
        for (std::size_t i = 0; i < q; ++i)
            for (std::size_t j = 0; j < q; ++j)
                h[i + 1][j + 1] = i == j ? 1 : chi[(i + q - j) % q];
        return h;
    }

    // Paley II: q = n/2 - 1 prime, q = 1 (mod 4). With the symmetric
    // conference matrix C = [[0, e^T], [e, Q]],
    // H = [[C+I, C-I], [C-I, -C-I]].
    if (n % 2 == 0 && n / 2 >= 2 && is_prime(n / 2 - 1) && (n / 2 - 1) % 4 == 1) {
        const std::size_t q = n / 2 - 1;
        const std::size_t half = q + 1;
        const std::vector<int> chi = legendre_table(q);
        HadamardMatrix c(half, std::vector<int>(half, 0));
        for (std::size_t j = 1; j < half; ++j) {
            c[0][j] = 1;
            c[j][0] = 1;
        }
        for (std::size_t i = 0; i < q; ++i)
            for (std::size_t j = 0; j < q; ++j)
                c[i + 1][j + 1] = chi[(i + q - j) % q];
        HadamardMatrix h(n, std::vector<int>(n, 0));
        for (std::size_t i = 0; i < half; ++i) {
            for (std::size_t j = 0; j < half; ++j) {
                const int ci = c[i][j];
                const int di = i == j ? 1 : 0;
                h[i][j] = ci + di;
                h[i][j + half] = ci - di;
                h[i + half][j] = ci - di;
                h[i + half][j + half] = -ci - di;
            }
        }
        return h;
    }

    // Sylvester doubling.
    if (n % 2 == 0 && hadamard_constructible(n / 2)) {
        const HadamardMatrix h0 = hadamard_matrix(n / 2);
        const std::size_t k = n / 2;
        HadamardMatrix h(n, std::vector<int>(n, 0));
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < k; ++j) {
                h[i][j] = h0[i][j];
                h[i][j + k] = h0[i][j];
                h[i + k][j] = h0[i][j];
                h[i + k][j + k] = -h0[i][j];
            }
        }
        return h;
    }

    throw HadamardUnavailableError("no Hadamard construction for order " + std::to_string(n));
}

// Smallest constructible order >= s (multiples of 4; a non-constructible
// multiple is skipped for the next one).
inline std::size_t smallest_hadamard_order(std::size_t s) {
    std::size_t n = std::max<std::size_t>(4, (s + 3) / 4 * 4);
    for (std::size_t i = 0; i < 512; ++i, n += 4)
        if (hadamard_constructible(n)) return n;
    throw HadamardUnavailableError("no constructible Hadamard order >= " + std::to_string(s));
}

inline double replicate_index(const DesignTable& table, const std::vector<double>& factors,
                              WeightingScheme w, IndexFamily f, AversionParam a,
                              const ReferenceSpec& ref) {
    const SufficientStats st = table.stats(&factors);
    return between_group_index(st.to_grouped_summary(), w, f, a, ref);
}

}  // namespace detail

// Balanced repeated replication. Requires exactly 2 PSUs per stratum;
// each replicate doubles one PSU per stratum and zeroes the other (or
// rescales by 2-f and f under Fay's method), with half-samples balanced
// by a Hadamard matrix of the smallest constructible order >= S.
// The replicate count is the Hadamard order; cfg.n_reps is not used.
inline VarianceEstimate brr_se(const SurveyDataset& d, const ReplicationConfig& cfg,
                               WeightingScheme w, IndexFamily f, AversionParam a,
                               const ReferenceSpec& ref = ReferenceSpec::population_average()) {
    const double fay = cfg.fay_coefficient;
    if (!(fay >= 0.0 && fay < 1.0))
        throw InvalidParameterError("Fay coefficient must lie in [0, 1)");
    const DesignTable table(d);
    for (std::size_t s = 0; s < table.strata_count(); ++s)
        if (table.psu_count(s) != 2)
            throw NotTwoPsuDesignError("stratum '" + table.strata()[s] + "' has " +
                                       std::to_string(table.psu_count(s)) +
                                       " PSUs; BRR requires exactly 2 per stratum");

    const std::size_t order = detail::smallest_hadamard_order(table.strata_count());
    const detail::HadamardMatrix h = detail::hadamard_matrix(order);

    VarianceEstimate est;
    est.method = VarianceMethod::BRR;
    est.point = detail::replicate_index(table, std::vector<double>(table.psu_count_total(), 1.0),
                                        w, f, a, ref);
    est.replicates.reserve(order);

    std::vector<double> factors(table.psu_count_total(), 1.0);
    for (std::size_t r = 0; r < order; ++r) {
        for (std::size_t s = 0; s < table.strata_count(); ++s) {
            const bool first = h[r][s] > 0;
            factors[table.psu_row(s, 0)] = first ? 2.0 - fay : fay;
            factors[table.psu_row(s, 1)] = first ? fay : 2.0 - fay;
        }
        est.replicates.push_back(detail::replicate_index(table, factors, w, f, a, ref));
    }

    double ss = 0.0;
    for (double t : est.replicates) ss += (t - est.point) * (t - est.point);
    const double rr = static_cast<double>(order);
    est.se = std::sqrt(ss / (rr * (1.0 - fay) * (1.0 - fay)));
    return est;
}

// Rao-Wu rescaled bootstrap: per replicate and stratum, C_s - 1 PSUs are
// drawn with replacement and each PSU's weight is scaled by
// C_s/(C_s-1) times its draw count. The variance divisor is 1/R (the
// rescaling already centers replicates at the full-sample estimate).
inline VarianceEstimate rescaled_bootstrap_se(
    const SurveyDataset& d, const ReplicationConfig& cfg, WeightingScheme w, IndexFamily f,
    AversionParam a, const ReferenceSpec& ref = ReferenceSpec::population_average()) {
    if (cfg.n_reps < 1) throw InvalidParameterError("bootstrap needs n_reps >= 1");
    const DesignTable table(d);
    for (std::size_t s = 0; s < table.strata_count(); ++s)
        if (table.psu_count(s) < 2)
            throw SingletonStratumError("stratum '" + table.strata()[s] +
                                        "' has a single PSU; the bootstrap needs >= 2");

    VarianceEstimate est;
    est.method = VarianceMethod::RescaledBootstrap;
    est.point = detail::replicate_index(table, std::vector<double>(table.psu_count_total(), 1.0),
                                        w, f, a, ref);
    est.replicates.reserve(cfg.n_reps);

    std::vector<double> factors(table.psu_count_total());
    std::vector<std::uint32_t> draws;
    for (std::size_t r = 0; r < cfg.n_reps; ++r) {
        for (std::size_t s = 0; s < table.strata_count(); ++s) {
            const std::size_t cs = table.psu_count(s);
            draws.assign(cs, 0);
            rng::Stream stream = rng::substream(cfg.rng_seed, rng::Purpose::Bootstrap, r, s);
            for (std::size_t k = 0; k + 1 < cs; ++k) ++draws[stream.next_below(cs)];
            const double scale = static_cast<double>(cs) / static_cast<double>(cs - 1);
            for (std::size_t c = 0; c < cs; ++c)
                factors[table.psu_row(s, c)] = scale * draws[c];
        }
        est.replicates.push_back(detail::replicate_index(table, factors, w, f, a, ref));
    }

    double ss = 0.0;
    for (double t : est.replicates) ss += (t - est.point) * (t - est.point);
    est.se = std::sqrt(ss / static_cast<double>(cfg.n_reps));
    return est;
}

// "No disparities" null simulation for binary outcomes: keeping strata,
// PSUs, and weights as they are, outcomes are replaced by independent
// Bernoulli draws with success probability equal to the overall weighted
// prevalence, so the disease shares match the population shares in
// expectation. Returns the bootstrap replicate distribution of the index
// on the simulated data.
inline std::vector<double> null_simulation(const SurveyDataset& d, const ReplicationConfig& cfg,
                                           WeightingScheme w, IndexFamily f, AversionParam a,
                                           const ReferenceSpec& ref =
                                               ReferenceSpec::population_average()) {
    if (!d.binary_outcomes())
        throw NonBinaryOutcomeError("the null simulation requires a binary (0/1) outcome");
    const double prevalence = compute_sufficient_stats(d).overall_mean();

    std::vector<SurveyRecord> sim = d.records();
    rng::Stream stream = rng::substream(cfg.rng_seed, rng::Purpose::NullOutcomes);
    for (SurveyRecord& r : sim) r.outcome = stream.next_bernoulli(prevalence) ? 1.0 : 0.0;

    const SurveyDataset null_data(std::move(sim), d.declared_groups());
    return rescaled_bootstrap_se(null_data, cfg, w, f, a, ref).replicates;
}

// Fraction of points from both samples that fall inside the intersection
// of the two sample ranges; 0 when the ranges are disjoint, 1 when the
// samples cover the same range.
inline double empirical_overlap(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.empty() || y.empty()) return 0.0;
    const auto [xmin, xmax] = std::minmax_element(x.begin(), x.end());
    const auto [ymin, ymax] = std::minmax_element(y.begin(), y.end());
    const double lo = std::max(*xmin, *ymin);
    const double hi = std::min(*xmax, *ymax);
    if (hi < lo) return 0.0;
    std::size_t inside = 0;
    for (double v : x) inside += (v >= lo && v <= hi);
    for (double v : y) inside += (v >= lo && v <= hi);
    return static_cast<double>(inside) / static_cast<double>(x.size() + y.size());
}

}  // namespace hdi
