#pragma once

// What-if engine: evaluate standardized indices for a baseline and a set
// of perturbed scenarios across a grid of disparity-aversion values, with
// absolute and relative changes against the baseline and a per-alpha
// discrimination summary (how far apart the scenarios stay per family).

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "hdi/between_group.hpp"
#include "hdi/divergence.hpp"
#include "hdi/error.hpp"
#include "hdi/types.hpp"

namespace hdi {

struct Scenario {
    std::string name;
    std::vector<double> sizes;
    std::vector<double> rates;  // group prevalences in [0, 1]
};

inline void validate_scenario(const Scenario& s) {
    if (s.sizes.size() != s.rates.size())
        throw DimensionMismatchError("scenario '" + s.name + "': sizes and rates differ in length");
    if (s.sizes.size() < 2)
        throw InvalidParameterError("scenario '" + s.name + "' needs at least 2 groups");
    for (double v : s.sizes)
        if (!(v > 0.0) || !std::isfinite(v))
            throw InvalidParameterError("scenario '" + s.name + "': sizes must be positive");
    for (double r : s.rates)
        if (!(r >= 0.0 && r <= 1.0))
            throw InvalidParameterError("scenario '" + s.name + "': rates must lie in [0, 1]");
}

inline GroupedSummary scenario_summary(const Scenario& s) {
    validate_scenario(s);
    std::vector<std::string> labels(s.sizes.size());
    for (std::size_t j = 0; j < labels.size(); ++j) labels[j] = std::to_string(j + 1);
    return GroupedSummary(std::move(labels), s.sizes, s.rates);
}

// Default reporting grid for the aversion parameter.
inline std::vector<double> default_alpha_grid() {
    return {0.5, 1, 2, 4, 8, 16, 32, 64, 128};
}

inline std::vector<IndexFamily> default_sweep_families() {
    return {IndexFamily::StandardizedSRI, IndexFamily::RefInvariantSymGE};
}

// Standardized index value for one sweep cell. Each family is mapped to
// its [0,1) standardized form; a symmetrized-GE value large enough to
// overflow simply saturates at 1.
inline double sweep_cell_value(const GroupedSummary& g, WeightingScheme w, IndexFamily f,
                               double alpha) {
    const double factor = alpha >= 0.5 ? alpha : 1.0 - alpha;
    switch (f) {
        case IndexFamily::Renyi:
        case IndexFamily::Atkinson:
            return between_group_index(g, w, IndexFamily::Atkinson, AversionParam{alpha});
        case IndexFamily::SymmetrizedRenyi:
        case IndexFamily::StandardizedSRI:
            return between_group_index(g, w, IndexFamily::StandardizedSRI, AversionParam{alpha});
        case IndexFamily::RefInvariantSymGE: {
            const auto mf = between_group_masses(g, w, ReferenceSpec::population_average());
            const double v = detail::ref_inv_sym_ge_core(detail::make_shares(mf.p),
                                                         detail::make_shares(mf.q), alpha);
            return detail::standardize(v, factor);
        }
        default:
            throw InvalidParameterError(std::string("family '") + family_name(f) +
                                        "' is not supported in scenario sweeps");
    }
}

struct SweepCell {
    std::string scenario;
    IndexFamily family = IndexFamily::StandardizedSRI;
    double alpha = 1.0;
    double value = 0.0;
    std::optional<double> abs_change;  // vs baseline; 0 for the baseline row
    std::optional<double> rel_change;  // absent when the baseline value is 0
};

struct SweepResult {
    std::vector<double> alpha_grid;
    std::vector<IndexFamily> families;
    WeightingScheme scheme = WeightingScheme::PopulationWeighted;
    std::vector<std::string> series;  // baseline name first, then scenarios
    std::vector<SweepCell> cells;     // series-major, then family, then alpha

    const SweepCell& cell(std::size_t series_i, std::size_t family_i, std::size_t alpha_i) const {
        return cells[(series_i * families.size() + family_i) * alpha_grid.size() + alpha_i];
    }
};

inline SweepResult run_sweep(const Scenario& baseline, const std::vector<Scenario>& scenarios,
                             const std::vector<double>& grid,
                             const std::vector<IndexFamily>& families, WeightingScheme w) {
    if (grid.empty()) throw InvalidParameterError("sweep needs a nonempty alpha grid");
    if (families.empty()) throw InvalidParameterError("sweep needs at least one family");
    const GroupedSummary gbase = scenario_summary(baseline);
    for (const Scenario& s : scenarios)
        if (s.sizes.size() != baseline.sizes.size())
            throw DimensionMismatchError("scenario '" + s.name +
                                         "' group count differs from the baseline");

    SweepResult out;
    out.alpha_grid = grid;
    out.families = families;
    out.scheme = w;
    out.series.push_back(baseline.name);
    for (const Scenario& s : scenarios) out.series.push_back(s.name);

    // Baseline values, kept for the change columns.
    std::vector<double> base_values(families.size() * grid.size());
    for (std::size_t fi = 0; fi < families.size(); ++fi)
        for (std::size_t ai = 0; ai < grid.size(); ++ai)
            base_values[fi * grid.size() + ai] =
                sweep_cell_value(gbase, w, families[fi], grid[ai]);

    auto emit = [&](const std::string& name, const GroupedSummary& g, bool is_baseline) {
        for (std::size_t fi = 0; fi < families.size(); ++fi) {
            for (std::size_t ai = 0; ai < grid.size(); ++ai) {
                const double base = base_values[fi * grid.size() + ai];
                SweepCell cell;
                cell.scenario = name;
                cell.family = families[fi];
                cell.alpha = grid[ai];
                cell.value = is_baseline ? base : sweep_cell_value(g, w, families[fi], grid[ai]);
                cell.abs_change = cell.value - base;
                if (base > 0.0) cell.rel_change = (cell.value - base) / base;
                out.cells.push_back(std::move(cell));
            }
        }
    };

    emit(baseline.name, gbase, true);
    for (const Scenario& s : scenarios) emit(s.name, scenario_summary(s), false);
    return out;
}

struct DiscriminationRow {
    double alpha = 0.0;
    std::vector<double> spread;  // max - min across series, per family
    // True where a symmetrized-GE family has collapsed (spread < 1e-4)
    // while an SRI family still separates the scenarios (spread > 1e-3).
    bool sge_collapsed_sri_distinct = false;
};

struct DiscriminationReport {
    std::vector<IndexFamily> families;
    std::vector<DiscriminationRow> rows;
};

inline DiscriminationReport discrimination_report(const SweepResult& result) {
    if (result.series.size() < 2)
        throw InvalidParameterError("discrimination report needs at least 2 scenarios");
    DiscriminationReport rep;
    rep.families = result.families;
    for (std::size_t ai = 0; ai < result.alpha_grid.size(); ++ai) {
        DiscriminationRow row;
        row.alpha = result.alpha_grid[ai];
        double sri_spread = -1.0, sge_spread = -1.0;
        for (std::size_t fi = 0; fi < result.families.size(); ++fi) {
            double lo = result.cell(0, fi, ai).value;
            double hi = lo;
            for (std::size_t si = 1; si < result.series.size(); ++si) {
                const double v = result.cell(si, fi, ai).value;
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            row.spread.push_back(hi - lo);
            const IndexFamily f = result.families[fi];
            if (f == IndexFamily::SymmetrizedRenyi || f == IndexFamily::StandardizedSRI)
                sri_spread = std::max(sri_spread, hi - lo);
            if (f == IndexFamily::RefInvariantSymGE || f == IndexFamily::SymmetrizedGE)
                sge_spread = std::max(sge_spread, hi - lo);
        }
        row.sge_collapsed_sri_distinct =
            sge_spread >= 0.0 && sri_spread >= 0.0 && sge_spread < 1e-4 && sri_spread > 1e-3;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

}  // namespace hdi
