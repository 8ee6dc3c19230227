#pragma once

#include "strata/dataset.hpp"

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace strata {

constexpr double variance_floor = 1e-9;

/// Per-attribute likelihood model.
struct AttributeLikelihood {
    std::size_t column = 0;
    ColumnKind kind = ColumnKind::nominal;
    // nominal: probability[class][value], each row sums to 1
    std::vector<std::vector<double>> probability;
    // numeric: per-class Gaussian
    std::vector<double> mean;
    std::vector<double> variance;
};

/// Bayes-rule classifier: P(C | X) is proportional to P(C) times the product
/// of per-attribute likelihoods P(x_i | C).
class NaiveBayesModel {
public:
    NaiveBayesModel() = default;
    NaiveBayesModel(std::vector<Column> schema, std::size_t label_index, double alpha, std::vector<double> priors,
                    std::vector<AttributeLikelihood> attributes);

    const std::vector<Column>& schema() const noexcept { return schema_; }
    std::size_t label_index() const noexcept { return label_index_; }
    double alpha() const noexcept { return alpha_; }
    const std::vector<double>& priors() const noexcept { return priors_; }
    const std::vector<AttributeLikelihood>& attributes() const noexcept { return attributes_; }
    const AttributeLikelihood& attribute(std::size_t column) const;

    /// Posterior over every label class, summing to 1. Missing cells and
    /// categories unseen at training are skipped.
    std::vector<double> posterior(std::span<const Cell> row) const;
    /// Argmax class (ties to the earlier class) and the posterior vector.
    std::pair<CategoryId, std::vector<double>> predict(std::span<const Cell> row) const;

private:
    std::vector<Column> schema_;
    std::size_t label_index_ = 0;
    double alpha_ = 1.0;
    std::vector<double> priors_;
    std::vector<AttributeLikelihood> attributes_;
};

/// Priors are class frequencies. Nominal likelihoods use additive smoothing
/// (count + alpha) / (class count + alpha * |values|); numeric ones are
/// Gaussian with a variance floor.
NaiveBayesModel train_naive_bayes(const Dataset& train, double alpha = 1.0);

} // namespace strata
