#pragma once

#include "strata/dataset.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace strata {

enum class Strategy { random, stratified, balanced };

std::string_view to_string(Strategy s);
Strategy parse_strategy(std::string_view text);

struct SamplingPlan {
    Strategy strategy = Strategy::balanced;
    std::size_t n = 1;
    std::uint64_t seed = 0;
    double minority_ratio = 0.01;
    bool with_replacement = false;

    /// `strategy=balanced n=5000 seed=42 minority_ratio=0.01 with_replacement=false`
    std::string to_string() const;
    static SamplingPlan parse(std::string_view text);
    void validate() const;
};

/// Row indices grouped by label category. Only non-empty classes appear,
/// in class order.
struct StrataIndex {
    struct Stratum {
        CategoryId label;
        std::vector<std::size_t> rows;
    };
    std::vector<Stratum> strata;
    std::size_t total = 0;    // rows with a present label
    std::size_t excluded = 0; // rows with a missing label

    std::size_t m() const noexcept { return strata.size(); }
    const Stratum* find(CategoryId label) const;
};

StrataIndex build_strata(const Dataset& ds, std::string_view label);

/// Uniform sample of n rows without replacement, original order kept.
Dataset random_sample(const Dataset& ds, std::size_t n, std::uint64_t seed);

struct ClassCount {
    CategoryId label;
    std::size_t count;
};

/// Largest-remainder proportional seats summing to n; ties on the remainder
/// go to the earlier class.
std::vector<ClassCount> allocate_proportional(const std::vector<ClassCount>& sizes, std::size_t n);

/// Proportional allocation over strata, then uniform draws per stratum.
Dataset stratified_sample(const Dataset& ds, std::string_view label, std::size_t n, std::uint64_t seed,
                          unsigned jobs = 1);

/// Classes whose share of labelled rows is at least minority_ratio.
std::vector<CategoryId> eligible_classes(const StrataIndex& index, double minority_ratio);

struct Allocation {
    struct Quota {
        CategoryId label;
        std::size_t quota;
        bool with_replacement; // stratum smaller than its quota
    };
    std::vector<Quota> quotas; // in selection order (descending stratum size)
    std::size_t requested = 0;
    std::size_t shortfall = 0; // remainder seats that found no capacity

    std::size_t total() const noexcept;
};

/// Equal quotas over the largest p strata that can each supply floor(n/p)
/// rows. With replacement, every stratum takes part and undersized strata
/// are drawn with replacement.
Allocation allocate_balanced(const std::vector<ClassCount>& sizes, std::size_t n, bool with_replacement);

/// build_strata, eligible_classes and allocate_balanced for a plan.
Allocation plan_balanced(const Dataset& ds, std::string_view label, const SamplingPlan& plan);

Dataset balanced_stratified_sample(const Dataset& ds, std::string_view label, const SamplingPlan& plan,
                                   unsigned jobs = 1);

/// Dispatches on plan.strategy.
Dataset draw_sample(const Dataset& ds, std::string_view label, const SamplingPlan& plan, unsigned jobs = 1);

} // namespace strata
