#pragma once

// Stratified multistage survey microdata and its reduction to the
// sufficient statistics U_{0,j} (weighted group sizes) and U_{1,j}
// (weighted group outcome totals), from which every between-group index
// is computed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "hdi/error.hpp"
#include "hdi/types.hpp"

namespace hdi {

struct SurveyRecord {
    std::string stratum;
    std::string psu;
    double weight = 0.0;
    std::string group;
    double outcome = 0.0;
};

class SurveyDataset {
public:
    explicit SurveyDataset(std::vector<SurveyRecord> records,
                           std::vector<std::string> declared_groups = {})
        : records_(std::move(records)), declared_groups_(std::move(declared_groups)) {
        if (records_.empty())
            throw ValidationError("survey dataset is empty");
        for (const SurveyRecord& r : records_) {
            if (!(r.weight > 0.0) || !std::isfinite(r.weight))
                throw ValidationError("sampling weights must be positive and finite");
            if (!std::isfinite(r.outcome) || r.outcome < 0.0)
                throw ValidationError("outcomes must be finite and >= 0");
        }
    }

    const std::vector<SurveyRecord>& records() const noexcept { return records_; }
    const std::vector<std::string>& declared_groups() const noexcept { return declared_groups_; }

    bool binary_outcomes() const {
        for (const SurveyRecord& r : records_)
            if (r.outcome != 0.0 && r.outcome != 1.0) return false;
        return true;
    }

private:
    std::vector<SurveyRecord> records_;
    std::vector<std::string> declared_groups_;
};

struct SufficientStats {
    std::vector<std::string> labels;  // sorted group labels
    std::vector<double> u0;           // weighted sizes per group
    std::vector<double> u1;           // weighted outcome totals per group

    double total_size() const {
        double s = 0.0;
        for (double v : u0) s += v;
        return s;
    }

    double total_outcome() const {
        double s = 0.0;
        for (double v : u1) s += v;
        return s;
    }

    // Overall weighted prevalence / mean.
    double overall_mean() const { return total_outcome() / total_size(); }

    GroupedSummary to_grouped_summary() const {
        std::vector<double> means(u0.size());
        for (std::size_t j = 0; j < u0.size(); ++j) means[j] = u1[j] / u0[j];
        return GroupedSummary(labels, u0, means);
    }
};

// Everything the estimators need, aggregated once: group/stratum/PSU id
// mappings (all sorted for determinism) and per-(PSU, group) totals of w
// and w*y. Replicate reweighting acts on whole PSUs, so replicate index
// values are computed from this table alone.
class DesignTable {
public:
    explicit DesignTable(const SurveyDataset& d) {
        std::set<std::string> gset(d.declared_groups().begin(), d.declared_groups().end());
        std::map<std::string, std::set<std::string>> design;
        for (const SurveyRecord& r : d.records()) {
            gset.insert(r.group);
            design[r.stratum].insert(r.psu);
        }
        groups_.assign(gset.begin(), gset.end());
        for (auto& [stratum, psus] : design) {
            strata_.push_back(stratum);
            psu_ids_.emplace_back(psus.begin(), psus.end());
        }
        psu_row_offset_.resize(strata_.size() + 1, 0);
        for (std::size_t s = 0; s < strata_.size(); ++s)
            psu_row_offset_[s + 1] = psu_row_offset_[s] + psu_ids_[s].size();

        const std::size_t m = groups_.size();
        cells_w_.assign(psu_count_total() * m, 0.0);
        cells_wy_.assign(psu_count_total() * m, 0.0);
        rec_group_.reserve(d.records().size());
        rec_row_.reserve(d.records().size());
        for (const SurveyRecord& r : d.records()) {
            const std::size_t j = index_of(groups_, r.group);
            const std::size_t s = index_of(strata_, r.stratum);
            const std::size_t c = index_of(psu_ids_[s], r.psu);
            const std::size_t row = psu_row_offset_[s] + c;
            cells_w_[row * m + j] += r.weight;
            cells_wy_[row * m + j] += r.weight * r.outcome;
            rec_group_.push_back(j);
            rec_row_.push_back(row);
        }
    }

    std::size_t group_count() const noexcept { return groups_.size(); }
    std::size_t strata_count() const noexcept { return strata_.size(); }
    std::size_t psu_count(std::size_t s) const { return psu_ids_[s].size(); }
    std::size_t psu_count_total() const { return psu_row_offset_.back(); }
    std::size_t psu_row(std::size_t s, std::size_t c) const { return psu_row_offset_[s] + c; }

    const std::vector<std::string>& groups() const noexcept { return groups_; }
    const std::vector<std::string>& strata() const noexcept { return strata_; }

    double cell_w(std::size_t row, std::size_t j) const { return cells_w_[row * groups_.size() + j]; }
    double cell_wy(std::size_t row, std::size_t j) const { return cells_wy_[row * groups_.size() + j]; }

    std::size_t record_group(std::size_t i) const { return rec_group_[i]; }
    std::size_t record_psu_row(std::size_t i) const { return rec_row_[i]; }

    // Sufficient statistics under per-PSU weight factors (all 1 for the
    // full sample).
    SufficientStats stats(const std::vector<double>* psu_factor = nullptr) const {
        const std::size_t m = groups_.size();
        SufficientStats st;
        st.labels = groups_;
        st.u0.assign(m, 0.0);
        st.u1.assign(m, 0.0);
        for (std::size_t row = 0; row < psu_count_total(); ++row) {
            const double f = psu_factor ? (*psu_factor)[row] : 1.0;
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < m; ++j) {
                st.u0[j] += f * cells_w_[row * m + j];
                st.u1[j] += f * cells_wy_[row * m + j];
            }
        }
        for (std::size_t j = 0; j < m; ++j)
            if (!(st.u0[j] > 0.0))
                throw EmptyGroupError("group '" + groups_[j] + "' has no records");
        return st;
    }

private:
    static std::size_t index_of(const std::vector<std::string>& sorted, const std::string& key) {
        return static_cast<std::size_t>(
            std::lower_bound(sorted.begin(), sorted.end(), key) - sorted.begin());
    }

    std::vector<std::string> groups_;
    std::vector<std::string> strata_;
    std::vector<std::vector<std::string>> psu_ids_;
    std::vector<std::size_t> psu_row_offset_;
    std::vector<double> cells_w_;
    std::vector<double> cells_wy_;
    std::vector<std::size_t> rec_group_;
    std::vector<std::size_t> rec_row_;
};

inline SufficientStats compute_sufficient_stats(const SurveyDataset& d) {
    return DesignTable(d).stats();
}

enum class VarianceMethod { TaylorLinearization, BRR, RescaledBootstrap };

inline const char* method_name(VarianceMethod m) noexcept {
    switch (m) {
        case VarianceMethod::TaylorLinearization: return "taylor";
        case VarianceMethod::BRR: return "brr";
        case VarianceMethod::RescaledBootstrap: return "bootstrap";
    }
    return "unknown";
}

struct VarianceEstimate {
    double point = 0.0;
    double se = 0.0;
    VarianceMethod method = VarianceMethod::TaylorLinearization;
    std::vector<double> replicates;  // present for replication methods only
};

struct ReplicationConfig {
    std::size_t n_reps = 500;
    double fay_coefficient = 0.0;  // 0 = pure BRR half-samples
    std::uint64_t rng_seed = 0;
};

}  // namespace hdi
