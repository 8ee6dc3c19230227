#include "strata/naive_bayes.hpp"

#include "strata/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace strata {

NaiveBayesModel::NaiveBayesModel(std::vector<Column> schema, std::size_t label_index, double alpha,
                                 std::vector<double> priors, std::vector<AttributeLikelihood> attributes)
    : schema_(std::move(schema)), label_index_(label_index), alpha_(alpha), priors_(std::move(priors)),
      attributes_(std::move(attributes)) {}

const AttributeLikelihood& NaiveBayesModel::attribute(std::size_t column) const {
    for (const auto& a : attributes_)
        if (a.column == column) return a;
    throw SchemaError("naive bayes: column " + std::to_string(column) + " is not an attribute");
}

std::vector<double> NaiveBayesModel::posterior(std::span<const Cell> row) const {
    if (row.size() != schema_.size())
        throw PredictionError("row has " + std::to_string(row.size()) + " cells, model schema has " +
                              std::to_string(schema_.size()));
    const std::size_t classes = priors_.size();
    std::vector<double> score(classes);
    for (std::size_t c = 0; c < classes; ++c) score[c] = std::log(priors_[c]);

    for (const auto& a : attributes_) {
        const Cell& x = row[a.column];
        if (x.missing()) continue;
        if (a.kind == ColumnKind::nominal) {
            if (!x.is_nominal()) throw PredictionError("numeric cell in nominal column '" + schema_[a.column].name() + "'");
            const auto v = static_cast<std::size_t>(x.category());
            if (x.category() < 0 || v >= a.probability.front().size()) continue;
            for (std::size_t c = 0; c < classes; ++c) score[c] += std::log(a.probability[c][v]);
        } else {
            if (!x.is_numeric()) throw PredictionError("nominal cell in numeric column '" + schema_[a.column].name() + "'");
            for (std::size_t c = 0; c < classes; ++c) {
                const double d = x.number() - a.mean[c];
                score[c] += -0.5 * std::log(2.0 * std::numbers::pi * a.variance[c]) - d * d / (2.0 * a.variance[c]);
            }
        }
    }

    const double top = *std::max_element(score.begin(), score.end());
    std::vector<double> post(classes, 0.0);
    if (top == -std::numeric_limits<double>::infinity()) {
        // Every class ruled out (possible only with alpha = 0): report the priors.
        post = priors_;
        return post;
    }
    double sum = 0.0;
    for (std::size_t c = 0; c < classes; ++c) {
        post[c] = std::exp(score[c] - top);
        sum += post[c];
    }
    for (double& p : post) p /= sum;
    return post;
}

std::pair<CategoryId, std::vector<double>> NaiveBayesModel::predict(std::span<const Cell> row) const {
    auto post = posterior(row);
    const auto best = std::max_element(post.begin(), post.end()) - post.begin();
    return {static_cast<CategoryId>(best), std::move(post)};
}

NaiveBayesModel train_naive_bayes(const Dataset& train, double alpha) {
    if (alpha < 0) throw TrainingError("naive bayes: alpha must be >= 0");
    const std::size_t label = train.label_index();
    const std::size_t classes = train.column(label).category_count();
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < train.rows(); ++r)
        if (!train.at(r, label).missing()) rows.push_back(r);
    if (rows.empty()) throw TrainingError("naive bayes: empty training set");

    std::vector<double> class_count(classes, 0.0);
    for (std::size_t r : rows) class_count[static_cast<std::size_t>(train.at(r, label).category())] += 1;
    std::vector<double> priors(classes);
    for (std::size_t c = 0; c < classes; ++c) priors[c] = class_count[c] / static_cast<double>(rows.size());

    std::vector<AttributeLikelihood> attributes;
    for (std::size_t col = 0; col < train.arity(); ++col) {
        if (col == label) continue;
        AttributeLikelihood a;
        a.column = col;
        a.kind = train.column(col).kind();
        if (a.kind == ColumnKind::nominal) {
            const std::size_t values = train.column(col).category_count();
            std::vector<std::vector<double>> counts(classes, std::vector<double>(values, 0.0));
            std::vector<double> known(classes, 0.0);
            for (std::size_t r : rows) {
                const Cell& x = train.at(r, col);
                if (x.missing()) continue;
                const auto y = static_cast<std::size_t>(train.at(r, label).category());
                counts[y][static_cast<std::size_t>(x.category())] += 1;
                known[y] += 1;
            }
            a.probability.assign(classes, std::vector<double>(values, 0.0));
            for (std::size_t c = 0; c < classes; ++c) {
                const double denom = known[c] + alpha * static_cast<double>(values);
                for (std::size_t v = 0; v < values; ++v)
                    a.probability[c][v] = denom > 0 ? (counts[c][v] + alpha) / denom : 1.0 / static_cast<double>(values);
            }
        } else {
            std::vector<double> sum(classes, 0.0), sq(classes, 0.0), n(classes, 0.0);
            double all_sum = 0, all_n = 0;
            for (std::size_t r : rows) {
                const Cell& x = train.at(r, col);
                if (x.missing()) continue;
                const auto y = static_cast<std::size_t>(train.at(r, label).category());
                sum[y] += x.number();
                n[y] += 1;
                all_sum += x.number();
                all_n += 1;
            }
            const double all_mean = all_n > 0 ? all_sum / all_n : 0.0;
            double all_sq = 0;
            a.mean.assign(classes, all_mean);
            for (std::size_t c = 0; c < classes; ++c)
                if (n[c] > 0) a.mean[c] = sum[c] / n[c];
            for (std::size_t r : rows) {
                const Cell& x = train.at(r, col);
                if (x.missing()) continue;
                const auto y = static_cast<std::size_t>(train.at(r, label).category());
                const double d = x.number() - a.mean[y];
                sq[y] += d * d;
                all_sq += (x.number() - all_mean) * (x.number() - all_mean);
            }
            // A class without values for this attribute borrows the pooled statistics.
            const double pooled = all_n > 0 ? all_sq / all_n : 1.0;
            a.variance.assign(classes, std::max(variance_floor, pooled));
            for (std::size_t c = 0; c < classes; ++c)
                if (n[c] > 0) a.variance[c] = std::max(variance_floor, sq[c] / n[c]);
        }
        attributes.push_back(std::move(a));
    }
    return NaiveBayesModel(train.columns(), label, alpha, std::move(priors), std::move(attributes));
}

} // namespace strata
