#pragma once

#include "strata/classifier.hpp"
#include "strata/dataset.hpp"
#include "strata/sampler.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace strata {

/// Train gets round(ratio * rows) rows; with stratify, the train seats are
/// spread over label strata by largest remainder. Both halves keep the
/// input row order.
std::pair<Dataset, Dataset> split_train_test(const Dataset& ds, double ratio, std::uint64_t seed, bool stratify);

double accuracy(std::span<const CategoryId> predictions, std::span<const CategoryId> truth);

struct EvalOptions {
    double split_ratio = 0.6;
    std::size_t iterations = 10;
    double minority_ratio = 0.01;
    bool with_replacement = false;
    ClassifierParams classifier;
    /// Columns dropped before training (other label columns, provenance).
    std::vector<std::string> exclude_columns;
};

enum class CellStatus { ok, skipped, failed };

std::string_view to_string(CellStatus status);

struct EvalCell {
    std::string dataset;
    std::string label;
    Strategy strategy = Strategy::random;
    ClassifierKind classifier = ClassifierKind::decision_tree;
    std::size_t sample_size = 0;
    std::vector<double> accuracies;
    double best = 0.0;
    double mean = 0.0;
    double stddev = 0.0; // sample standard deviation; 0 for one iteration
    std::uint64_t seed = 0;
    CellStatus status = CellStatus::ok;
    std::string reason;
};

/// One iteration draws a fresh sample and a fresh split from
/// mix_seed(seed, i), trains and scores test accuracy. Rows with a missing
/// label are dropped first.
EvalCell run_cell(const Dataset& ds, std::string_view label, Strategy strategy, ClassifierKind classifier,
                  std::size_t size, std::uint64_t seed, const EvalOptions& options = {});

struct GridConfig {
    std::vector<std::string> datasets; // dataset ids (or paths, for the CLI)
    std::vector<std::string> labels;
    std::vector<Strategy> strategies{Strategy::random, Strategy::stratified, Strategy::balanced};
    std::vector<ClassifierKind> classifiers{ClassifierKind::decision_tree, ClassifierKind::naive_bayes,
                                            ClassifierKind::knn};
    std::vector<std::size_t> sizes{500, 1000, 2000, 5000, 10000, 15000, 20000, 25000, 30000};
    double split_ratio = 0.6;
    std::size_t iterations = 10;
    std::uint64_t seed = 42;
    double minority_ratio = 0.01;
    bool with_replacement = false;
    ClassifierParams classifier;

    void validate() const;
    /// `key = value` lines, lists comma-separated.
    static GridConfig parse(std::string_view text);
    std::size_t cell_count() const;
};

struct ExperimentReport {
    std::vector<EvalCell> cells; // canonical order: dataset, label, strategy, classifier, size

    /// `dataset,label,strategy,classifier,sample_size,iteration,accuracy`
    std::string results_csv() const;
    /// Per cell: status, best, mean, stddev, seed, reason.
    std::string summary_csv() const;
    static ExperimentReport from_csv(std::string_view results_csv, std::string_view summary_csv);
};

/// Seed of a grid cell, derived from the master seed and the cell's
/// coordinates only.
std::uint64_t cell_seed(std::uint64_t master, std::string_view dataset, std::string_view label, Strategy strategy,
                        ClassifierKind classifier, std::size_t size);

/// Runs every grid point. Infeasible sizes are recorded as skipped and
/// other per-cell errors as failed; the grid always completes. Output is
/// identical for any jobs count.
ExperimentReport run_grid(const GridConfig& config, const std::map<std::string, Dataset>& datasets,
                          unsigned jobs = 1);

} // namespace strata
