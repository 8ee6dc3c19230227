#pragma once

#include "strata/dataset.hpp"
#include "strata/decision_tree.hpp"
#include "strata/knn.hpp"
#include "strata/naive_bayes.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace strata {

enum class ClassifierKind { decision_tree, naive_bayes, knn };

std::string_view to_string(ClassifierKind kind);
/// Short column heading: DT, NB or KNN.
std::string_view short_name(ClassifierKind kind);
/// Accepts decision_tree/dt, naive_bayes/nb, knn.
ClassifierKind parse_classifier(std::string_view text);

struct ClassifierParams {
    TreeParams tree;
    double alpha = 1.0;
    KnnParams knn;
};

using Model = std::variant<DecisionTreeModel, NaiveBayesModel, KnnModel>;

Model train_model(ClassifierKind kind, const Dataset& train, const ClassifierParams& params = {});
CategoryId predict(const Model& model, std::span<const Cell> row);
const std::vector<Column>& model_schema(const Model& model);
std::size_t model_label_index(const Model& model);
/// Predicts every row of ds, which must share the model's schema.
std::vector<CategoryId> predict_all(const Model& model, const Dataset& ds);

// Model files are CSV records; the first record is `strata-model,1`.
// k-NN models reference their training data by path instead of embedding it.
std::string serialize_model(const Model& model, const std::string& knn_training_path = {});
/// Relative k-NN training paths resolve against base_dir.
Model deserialize_model(std::string_view text, const std::filesystem::path& base_dir = ".");

} // namespace strata
