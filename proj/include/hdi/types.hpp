#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "hdi/error.hpp"

namespace hdi {

// Nonnegative weights over m >= 2 groups. Not required to sum to one;
// every index here is evaluated on the normalized shares internally.
class MassFunction {
public:
    explicit MassFunction(std::vector<double> values) : values_(std::move(values)) {
        if (values_.size() < 2)
            throw InvalidParameterError("mass function needs at least 2 groups");
        total_ = 0.0;
        for (double v : values_) {
            if (!std::isfinite(v) || v < 0.0)
                throw InvalidParameterError("mass function entries must be finite and >= 0");
            total_ += v;
        }
        if (total_ <= 0.0)
            throw InvalidParameterError("mass function needs at least one positive entry");
    }

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t j) const { return values_[j]; }
    const std::vector<double>& values() const noexcept { return values_; }
    double total() const noexcept { return total_; }

    std::vector<double> normalized() const {
        std::vector<double> out(values_);
        for (double& v : out) v /= total_;
        return out;
    }

private:
    std::vector<double> values_;
    double total_ = 0.0;
};

// Disparity aversion parameter (alpha for the Renyi/GE families, beta for
// the Bregman family).
struct AversionParam {
    double alpha = 1.0;
};

enum class WeightingScheme {
    PopulationWeighted,  // p_j = n_j / n
    EquallyWeighted      // p_j = 1 / m
};

enum class IndexFamily {
    Renyi,
    SymmetrizedRenyi,
    GeneralizedEntropy,
    SymmetrizedGE,
    RefInvariantSymGE,
    Beta,
    SymmetrizedBeta,
    Atkinson,
    StandardizedSRI
};

// Denominator of the relative disparities r_j. Reference-invariant
// families give identical values under every variant.
struct ReferenceSpec {
    enum class Kind { PopulationAverage, LeastAdverse, FixedTarget };

    Kind kind = Kind::PopulationAverage;
    double target = 0.0;

    static ReferenceSpec population_average() { return {Kind::PopulationAverage, 0.0}; }
    static ReferenceSpec least_adverse() { return {Kind::LeastAdverse, 0.0}; }
    static ReferenceSpec fixed_target(double t) {
        if (!(t > 0.0) || !std::isfinite(t))
            throw InvalidParameterError("fixed reference target must be a positive real");
        return {Kind::FixedTarget, t};
    }
};

// Per-group sizes (counts or weighted counts) and outcome means: the
// sufficient input for every between-group index.
class GroupedSummary {
public:
    GroupedSummary(std::vector<std::string> labels, std::vector<double> sizes,
                   std::vector<double> means)
        : labels_(std::move(labels)), sizes_(std::move(sizes)), means_(std::move(means)) {
        if (labels_.size() != sizes_.size() || sizes_.size() != means_.size())
            throw DimensionMismatchError("grouped summary vectors must share one length");
        if (sizes_.size() < 2)
            throw InvalidParameterError("grouped summary needs at least 2 groups");
        for (double s : sizes_)
            if (!(s > 0.0) || !std::isfinite(s))
                throw InvalidParameterError("group sizes must be positive and finite");
        for (double m : means_)
            if (!std::isfinite(m) || m < 0.0)
                throw InvalidParameterError("group means must be finite and >= 0");
        total_size_ = std::accumulate(sizes_.begin(), sizes_.end(), 0.0);
        weighted_total_ = 0.0;
        for (std::size_t j = 0; j < sizes_.size(); ++j)
            weighted_total_ += sizes_[j] * means_[j];
    }

    std::size_t group_count() const noexcept { return sizes_.size(); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const std::vector<double>& sizes() const noexcept { return sizes_; }
    const std::vector<double>& means() const noexcept { return means_; }

    double total_size() const noexcept { return total_size_; }

    // Population-weighted overall mean ybar_{..} = sum n_j ybar_j / n.
    double overall_mean() const noexcept { return weighted_total_ / total_size_; }

    // Index of the group with the least adverse outcome; lowest index
    // wins ties so reporting is deterministic.
    std::size_t least_adverse_group() const {
        std::size_t best = 0;
        for (std::size_t j = 1; j < means_.size(); ++j)
            if (means_[j] < means_[best]) best = j;
        return best;
    }

private:
    std::vector<std::string> labels_;
    std::vector<double> sizes_;
    std::vector<double> means_;
    double total_size_ = 0.0;
    double weighted_total_ = 0.0;
};

// Resolved reference value for a grouped summary, with the reference
// group label when one exists.
struct ResolvedReference {
    double value = 0.0;
    std::string label;  // empty unless kind == LeastAdverse
};

inline ResolvedReference resolve_reference(const GroupedSummary& g, const ReferenceSpec& ref) {
    switch (ref.kind) {
        case ReferenceSpec::Kind::PopulationAverage:
            return {g.overall_mean(), ""};
        case ReferenceSpec::Kind::LeastAdverse: {
            const std::size_t j = g.least_adverse_group();
            return {g.means()[j], g.labels()[j]};
        }
        case ReferenceSpec::Kind::FixedTarget:
            return {ref.target, ""};
    }
    throw InvalidParameterError("unknown reference kind");
}

inline const char* family_name(IndexFamily f) noexcept {
    switch (f) {
        case IndexFamily::Renyi: return "renyi";
        case IndexFamily::SymmetrizedRenyi: return "sri";
        case IndexFamily::GeneralizedEntropy: return "ge";
        case IndexFamily::SymmetrizedGE: return "sge";
        case IndexFamily::RefInvariantSymGE: return "risge";
        case IndexFamily::Beta: return "beta";
        case IndexFamily::SymmetrizedBeta: return "sbeta";
        case IndexFamily::Atkinson: return "atkinson";
        case IndexFamily::StandardizedSRI: return "ssri";
    }
    return "unknown";
}

inline const char* scheme_name(WeightingScheme w) noexcept {
    return w == WeightingScheme::PopulationWeighted ? "pw" : "ew";
}

}  // namespace hdi
