#pragma once

#include "strata/dataset.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace strata {

// ---------------------------------------------------------------------------
// Recodes

/// Survival time recode "YYMM" to months: 12 * YY + MM.
int recode_survival_months(std::string_view raw);

enum class VitalStatus { alive, dead };
enum class SurvivalOutcome { survived, not_survived, excluded };

std::string_view to_string(SurvivalOutcome outcome);

constexpr int default_survival_threshold_months = 60;

/// Survived past the threshold, died of the studied cancer before it, or
/// excluded (censored alive, or death from another cause, before it).
SurvivalOutcome derive_survival_label(int months, VitalStatus vital_status, std::string_view cause_of_death,
                                      std::string_view studied_cancer,
                                      int threshold_months = default_survival_threshold_months);

/// One row of the metastasis mapping table. Era bounds are inclusive years.
struct MetastasisRule {
    int era_from = 0;
    int era_to = 9999;
    std::string source_column;
    std::string code;
    std::string target;
};

/// Merges pre-CS extent-of-disease codes and collaborative-stage codes into
/// one shared category set.
struct MetastasisMapping {
    std::vector<MetastasisRule> rules;
    std::optional<std::string> fallback;
    int cs_first_year = 2004;

    /// CSV with header era_range,source_column,code,target_category. An
    /// era_range of `*` with empty source and code declares the fallback.
    static MetastasisMapping from_csv(std::string_view text);
    /// Ordered distinct targets (fallback last).
    std::vector<std::string> categories() const;
};

/// Looks the row up through EOD columns for eras before cs_first_year and
/// through CS columns otherwise; first matching rule wins.
std::string derive_metastasis_label(const Dataset& ds, std::size_t row, const std::vector<std::string>& eod_columns,
                                    const std::vector<std::string>& cs_columns, const std::string& era_column,
                                    const MetastasisMapping& mapping);

// ---------------------------------------------------------------------------
// Filters

struct FilterReport {
    struct MissingRemoval {
        std::string column;
        double fraction;
    };
    struct CorrelationRemoval {
        std::string kept;
        std::string dropped;
        double score;
    };
    struct GainRemoval {
        std::string column;
        double gain;
    };

    std::vector<MissingRemoval> removed_by_missing;
    std::vector<CorrelationRemoval> removed_by_correlation;
    std::vector<GainRemoval> removed_by_infogain;
    std::size_t rows_removed = 0;

    bool empty() const noexcept {
        return removed_by_missing.empty() && removed_by_correlation.empty() && removed_by_infogain.empty() &&
               rows_removed == 0;
    }
    void merge(const FilterReport& other);
    /// `stage,column,other,value` rows.
    std::string to_csv() const;
};

enum class RowPolicy { drop_any_missing, keep };

/// Drops columns whose missing fraction exceeds col_threshold, then (under
/// drop_any_missing) rows still holding a missing cell.
std::pair<Dataset, FilterReport> remove_missing(const Dataset& ds, double col_threshold = 0.5,
                                                RowPolicy row_policy = RowPolicy::drop_any_missing);

/// Pearson |r| (numeric pairs) or Cramér's V (nominal pairs) over rows where
/// both cells are present. Constant columns score 0.
double association(const Dataset& ds, std::size_t a, std::size_t b);

/// Single greedy pass in schema order over same-group column pairs; the later
/// column of any pair scoring >= threshold is dropped. Untagged columns and
/// the label column are never dropped.
std::pair<Dataset, FilterReport> correlation_filter(const Dataset& ds, double threshold = 0.95);

constexpr std::size_t default_numeric_bins = 10;

/// Information gain of attr about label in bits. Numeric attributes are cut
/// into equal-width bins; missing cells form their own bin. Rows with a
/// missing label are ignored.
double information_gain(const Dataset& ds, std::string_view label, std::string_view attr,
                        std::size_t numeric_bins = default_numeric_bins);
/// Entropy of the label in bits over rows with a present label.
double label_entropy(const Dataset& ds, std::string_view label);

std::pair<Dataset, FilterReport> information_gain_filter(const Dataset& ds, std::string_view label,
                                                         double min_gain = 0.001,
                                                         std::size_t numeric_bins = default_numeric_bins);

// ---------------------------------------------------------------------------
// Pipeline

struct SurvivalConfig {
    std::string months_column;  // STR, raw YYMM text
    std::string vital_column;
    std::string cod_column;
    std::string alive_code = "alive";
    std::string dead_code = "dead";
    std::string studied_cancer;
    int threshold_months = default_survival_threshold_months;
    std::string output = "survival";
    bool drop_excluded = true;
};

struct MetastasisConfig {
    MetastasisMapping mapping;
    std::vector<std::string> eod_columns;
    std::vector<std::string> cs_columns;
    std::string era_column;
    std::string output = "metastasis";
};

struct PreprocessConfig {
    std::optional<SurvivalConfig> survival;
    std::optional<MetastasisConfig> metastasis;
    std::vector<std::string> drop_columns;
    double missing_threshold = 0.5;
    RowPolicy row_policy = RowPolicy::drop_any_missing;
    double correlation_threshold = 0.95;
    double min_gain = 0.001;
    std::size_t numeric_bins = default_numeric_bins;
    std::optional<std::string> label;
};

/// Reads the `key = value` preprocessing config. Relative mapping paths are
/// resolved against base_dir.
PreprocessConfig parse_preprocess_config(std::string_view text, const std::string& base_dir = ".");

/// Label derivation, then missing removal, correlation filter and
/// information-gain filter, in that order.
std::pair<Dataset, FilterReport> preprocess(const Dataset& ds, const PreprocessConfig& config);

} // namespace strata
