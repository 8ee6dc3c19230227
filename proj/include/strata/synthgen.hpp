#pragma once

#include "strata/dataset.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace strata {

struct SynthLabel {
    std::string name;
    std::vector<std::string> classes;
    std::vector<double> proportions;
};

struct SynthAttribute {
    std::string name;
    ColumnKind kind = ColumnKind::nominal;
    std::string group;
    std::size_t depends_on = 0; // index into SynthSpec::labels
    double missing_rate = 0.0;

    // nominal: weights over categories, class-independent and per class
    std::vector<std::string> categories;
    std::vector<double> base;
    std::vector<std::vector<double>> per_class;

    // numeric: Gaussian, class-independent and per class
    double base_mean = 0.0;
    double base_sd = 1.0;
    std::vector<double> class_mean;
    std::vector<double> class_sd;
};

/// Each attribute value comes from its class-conditional distribution with
/// probability `signal`, otherwise from the class-independent one.
struct SynthSpec {
    std::size_t rows = 50000;
    double signal = 0.8;
    std::vector<SynthLabel> labels;
    std::vector<SynthAttribute> attributes;

    void validate() const;

    /// Config dialect:
    ///
    ///     rows = 50000
    ///     signal = 0.8
    ///     [label stage]
    ///     classes = I, II, III, IV
    ///     proportions = 0.7, 0.2, 0.09, 0.01
    ///     [attribute grade]
    ///     kind = nominal
    ///     categories = g1, g2, g3
    ///     base = 0.4, 0.3, 0.3
    ///     class.I = 0.8, 0.1, 0.1
    ///
    /// Numeric attributes give `base = mean, sd` and `class.X = mean, sd`.
    /// A root `profile = default` starts from default_profile().
    static SynthSpec parse(std::string_view text);
    std::string to_config() const;

    /// 50000 rows, 36 mixed attributes, stage-like label at 70/20/9/1.
    static SynthSpec default_profile();
};

/// Attribute columns in spec order, then one nominal column per label; the
/// first label becomes the dataset label. Row r draws from a stream seeded
/// by (seed, r), so output is independent of jobs.
Dataset generate(const SynthSpec& spec, std::uint64_t seed, unsigned jobs = 1);

/// Column name reserved for mix() provenance.
inline constexpr std::string_view source_column = "source";

/// n_a random rows of a followed by n_b random rows of b, projected onto
/// their shared columns, plus a `source` column naming the origin.
Dataset mix(const Dataset& a, const Dataset& b, std::size_t n_a, std::size_t n_b, std::uint64_t seed,
            std::string_view name_a = "a", std::string_view name_b = "b");

} // namespace strata
