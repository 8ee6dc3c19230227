#pragma once

#include "strata/dataset.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace strata {

struct NumericRange {
    double min = 0.0;
    double max = 0.0;
};

/// Per-column setup of the mixed distance: nominal columns contribute 0/1
/// mismatch, numeric columns the difference of min-max normalized values
/// (clamped to [0, 1]), and a missing cell on either side contributes 1.
struct DistanceSpace {
    std::vector<ColumnKind> kinds;
    std::vector<NumericRange> ranges;
    std::vector<bool> active;

    /// Ranges from ds; `exclude` (the label) takes no part in distances.
    static DistanceSpace fit(const Dataset& ds, std::optional<std::size_t> exclude = std::nullopt);

    double normalize(std::size_t column, double value) const;
    /// Encodes a row into one double per column: normalized numeric value,
    /// category id, or NaN for missing.
    void encode(std::span<const Cell> row, std::span<double> out) const;
    /// Distance between two encoded rows.
    double encoded_distance(const double* a, const double* b) const;
};

double mixed_distance(std::span<const Cell> a, std::span<const Cell> b, const DistanceSpace& space);

struct KnnParams {
    std::size_t k = 10;
};

/// Instance store. Prediction is a majority vote of the k nearest rows;
/// distance ties go to the earlier training row, vote ties to the smaller
/// mean distance, then the earlier class.
class KnnModel {
public:
    KnnModel() = default;
    KnnModel(Dataset training, KnnParams params);

    const Dataset& training() const noexcept { return training_; }
    const std::vector<Column>& schema() const noexcept { return training_.columns(); }
    std::size_t label_index() const noexcept { return label_index_; }
    std::size_t k() const noexcept { return params_.k; }
    const DistanceSpace& space() const noexcept { return space_; }

    CategoryId predict(std::span<const Cell> row) const;
    /// Training-row indices of the k nearest neighbours, nearest first.
    std::vector<std::size_t> neighbours(std::span<const Cell> row) const;

private:
    std::vector<std::pair<double, std::size_t>> nearest(std::span<const Cell> row) const;

    Dataset training_;
    KnnParams params_;
    std::size_t label_index_ = 0;
    DistanceSpace space_;
    std::vector<double> encoded_; // rows x arity
    std::vector<CategoryId> labels_;
};

KnnModel train_knn(const Dataset& train, const KnnParams& params = {});

} // namespace strata
