#pragma once

#include "strata/dataset.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace strata {

struct TreeParams {
    std::size_t min_leaf = 2;
    std::optional<std::size_t> max_depth;
};

struct TreeNode {
    enum class Kind : std::uint8_t { leaf, nominal, numeric };

    Kind kind = Kind::leaf;
    std::size_t attribute = 0;
    double threshold = 0.0; // numeric: value <= threshold goes to children[0]
    // nominal: one entry per category id, -1 meaning "use default_child";
    // numeric: {<=, >}.
    std::vector<std::int32_t> children;
    std::int32_t default_child = -1;
    CategoryId prediction = 0;
    std::vector<std::size_t> distribution; // training rows per class routed here
};

/// C4.5-style tree: gain-ratio splits, multiway on nominal attributes,
/// binary thresholds on numeric ones, no pruning.
class DecisionTreeModel {
public:
    DecisionTreeModel() = default;
    DecisionTreeModel(std::vector<Column> schema, std::size_t label_index, TreeParams params,
                      std::vector<TreeNode> nodes);

    const std::vector<Column>& schema() const noexcept { return schema_; }
    std::size_t label_index() const noexcept { return label_index_; }
    const TreeParams& params() const noexcept { return params_; }
    const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
    std::size_t depth() const;
    std::size_t leaf_count() const;

    /// Unseen categories and missing cells follow the default child.
    CategoryId predict(std::span<const Cell> row) const;

private:
    std::vector<Column> schema_;
    std::size_t label_index_ = 0;
    TreeParams params_;
    std::vector<TreeNode> nodes_; // nodes_[0] is the root
};

/// Trains on ds.label(); rows with a missing label are ignored.
DecisionTreeModel train_decision_tree(const Dataset& train, const TreeParams& params = {});

} // namespace strata
