#include "strata/decision_tree.hpp"

#include "strata/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace strata {

DecisionTreeModel::DecisionTreeModel(std::vector<Column> schema, std::size_t label_index, TreeParams params,
                                     std::vector<TreeNode> nodes)
    : schema_(std::move(schema)), label_index_(label_index), params_(params), nodes_(std::move(nodes)) {
    if (nodes_.empty()) throw TrainingError("decision tree has no nodes");
}

std::size_t DecisionTreeModel::depth() const {
    std::size_t best = 0;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
    while (!stack.empty()) {
        auto [id, d] = stack.back();
        stack.pop_back();
        best = std::max(best, d);
        for (auto child : nodes_[id].children)
            if (child >= 0) stack.emplace_back(static_cast<std::size_t>(child), d + 1);
    }
    return best;
}

std::size_t DecisionTreeModel::leaf_count() const {
    return static_cast<std::size_t>(
        std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.kind == TreeNode::Kind::leaf; }));
}

CategoryId DecisionTreeModel::predict(std::span<const Cell> row) const {
    if (row.size() != schema_.size())
        throw PredictionError("row has " + std::to_string(row.size()) + " cells, model schema has " +
                              std::to_string(schema_.size()));
    std::size_t id = 0;
    for (;;) {
        const TreeNode& node = nodes_[id];
        if (node.kind == TreeNode::Kind::leaf) return node.prediction;
        const Cell& cell = row[node.attribute];
        std::int32_t next = node.default_child;
        if (node.kind == TreeNode::Kind::nominal) {
            if (cell.is_numeric()) throw PredictionError("numeric cell in nominal column '" + schema_[node.attribute].name() + "'");
            if (cell.is_nominal() && cell.category() >= 0 &&
                static_cast<std::size_t>(cell.category()) < node.children.size() &&
                node.children[static_cast<std::size_t>(cell.category())] >= 0)
                next = node.children[static_cast<std::size_t>(cell.category())];
        } else {
            if (cell.is_nominal()) throw PredictionError("nominal cell in numeric column '" + schema_[node.attribute].name() + "'");
            if (cell.is_numeric()) next = node.children[cell.number() <= node.threshold ? 0 : 1];
        }
        id = static_cast<std::size_t>(next);
    }
}

namespace {

double entropy(const std::vector<std::size_t>& counts, std::size_t total) {
    if (total == 0) return 0.0;
    double h = 0.0;
    const double n = static_cast<double>(total);
    for (std::size_t c : counts)
        if (c) {
            const double p = static_cast<double>(c) / n;
            h -= p * std::log2(p);
        }
    return h;
}

/// Split information over branch sizes plus the missing partition.
double split_info(const std::vector<std::size_t>& sizes, std::size_t missing, std::size_t total) {
    double s = 0.0;
    const double n = static_cast<double>(total);
    auto term = [&](std::size_t m) {
        if (m) {
            const double p = static_cast<double>(m) / n;
            s -= p * std::log2(p);
        }
    };
    for (std::size_t m : sizes) term(m);
    term(missing);
    return s;
}

constexpr double gain_epsilon = 1e-12;

struct Candidate {
    bool valid = false;
    std::size_t attribute = 0;
    double gain = 0.0;
    double ratio = 0.0;
    double threshold = 0.0;
};

class TreeBuilder {
public:
    TreeBuilder(const Dataset& ds, const TreeParams& params)
        : ds_(ds), params_(params), label_(ds.label_index()),
          classes_(ds.column(label_).category_count()) {
        for (std::size_t c = 0; c < ds.arity(); ++c)
            if (c != label_) attributes_.push_back(c);
    }

    std::vector<TreeNode> build(std::vector<std::size_t> rows) {
        struct Task {
            std::size_t node;
            std::vector<std::size_t> rows;
            std::vector<bool> used;
            std::size_t depth;
        };
        nodes_.emplace_back();
        std::vector<Task> stack;
        stack.push_back({0, std::move(rows), std::vector<bool>(ds_.arity(), false), 0});
        while (!stack.empty()) {
            Task task = std::move(stack.back());
            stack.pop_back();
            auto children = expand(task.node, task.rows, task.used, task.depth);
            // Push in reverse so children are expanded in branch order.
            for (auto it = children.rbegin(); it != children.rend(); ++it) {
                auto used = task.used;
                if (nodes_[task.node].kind == TreeNode::Kind::nominal) used[nodes_[task.node].attribute] = true;
                stack.push_back({it->first, std::move(it->second), std::move(used), task.depth + 1});
            }
        }
        return std::move(nodes_);
    }

private:
    CategoryId label_of(std::size_t row) const { return ds_.at(row, label_).category(); }

    std::vector<std::size_t> class_counts(const std::vector<std::size_t>& rows) const {
        std::vector<std::size_t> counts(classes_, 0);
        for (std::size_t r : rows) ++counts[static_cast<std::size_t>(label_of(r))];
        return counts;
    }

    Candidate evaluate_nominal(std::size_t attr, const std::vector<std::size_t>& rows) const {
        const std::size_t values = ds_.column(attr).category_count();
        std::vector<std::vector<std::size_t>> table(values, std::vector<std::size_t>(classes_, 0));
        std::vector<std::size_t> sizes(values, 0);
        std::vector<std::size_t> known_counts(classes_, 0);
        std::size_t known = 0;
        for (std::size_t r : rows) {
            const Cell& x = ds_.at(r, attr);
            if (x.missing()) continue;
            const auto v = static_cast<std::size_t>(x.category());
            const auto y = static_cast<std::size_t>(label_of(r));
            ++table[v][y];
            ++sizes[v];
            ++known_counts[y];
            ++known;
        }
        Candidate cand;
        cand.attribute = attr;
        const auto big_branches = std::count_if(sizes.begin(), sizes.end(),
                                                [&](std::size_t s) { return s >= std::max<std::size_t>(1, params_.min_leaf); });
        if (known == 0 || big_branches < 2) return cand;
        double conditional = 0.0;
        for (std::size_t v = 0; v < values; ++v)
            if (sizes[v])
                conditional += static_cast<double>(sizes[v]) / static_cast<double>(known) * entropy(table[v], sizes[v]);
        const double known_fraction = static_cast<double>(known) / static_cast<double>(rows.size());
        cand.gain = std::max(0.0, known_fraction * (entropy(known_counts, known) - conditional));
        const double info = split_info(sizes, rows.size() - known, rows.size());
        if (info <= 0.0) return cand;
        cand.ratio = cand.gain / info;
        cand.valid = true;
        return cand;
    }

    Candidate evaluate_numeric(std::size_t attr, const std::vector<std::size_t>& rows) const {
        std::vector<std::pair<double, CategoryId>> known;
        known.reserve(rows.size());
        for (std::size_t r : rows) {
            const Cell& x = ds_.at(r, attr);
            if (!x.missing()) known.emplace_back(x.number(), label_of(r));
        }
        Candidate cand;
        cand.attribute = attr;
        const std::size_t n = known.size();
        const std::size_t min_leaf = std::max<std::size_t>(1, params_.min_leaf);
        if (n < 2 * min_leaf) return cand;
        std::sort(known.begin(), known.end());
        std::vector<std::size_t> total(classes_, 0);
        for (const auto& [v, y] : known) ++total[static_cast<std::size_t>(y)];
        const double base = entropy(total, n);

        std::vector<std::size_t> left(classes_, 0);
        std::vector<std::size_t> right = total;
        double best_gain = -1.0;
        std::size_t best_split = 0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const auto y = static_cast<std::size_t>(known[i].second);
            ++left[y];
            --right[y];
            if (known[i].first == known[i + 1].first) continue;
            const std::size_t nl = i + 1, nr = n - nl;
            if (nl < min_leaf || nr < min_leaf) continue;
            const double cond = (static_cast<double>(nl) * entropy(left, nl) + static_cast<double>(nr) * entropy(right, nr)) /
                                static_cast<double>(n);
            const double gain = base - cond;
            if (gain > best_gain + gain_epsilon) {
                best_gain = gain;
                best_split = i;
            }
        }
        if (best_gain < 0.0) return cand;
        const double lo = known[best_split].first;
        const double hi = known[best_split + 1].first;
        double mid = lo + (hi - lo) / 2.0;
        if (!(mid >= lo && mid < hi)) mid = lo;
        const double known_fraction = static_cast<double>(n) / static_cast<double>(rows.size());
        cand.threshold = mid;
        cand.gain = std::max(0.0, known_fraction * best_gain);
        const std::vector<std::size_t> sizes{best_split + 1, n - best_split - 1};
        const double info = split_info(sizes, rows.size() - n, rows.size());
        if (info <= 0.0) return cand;
        cand.ratio = cand.gain / info;
        cand.valid = true;
        return cand;
    }

    /// Turns nodes_[id] into a leaf or a split; returns (child id, rows) pairs.
    std::vector<std::pair<std::size_t, std::vector<std::size_t>>> expand(std::size_t id,
                                                                           const std::vector<std::size_t>& rows,
                                                                           const std::vector<bool>& used,
                                                                           std::size_t depth) {
        {
            TreeNode& node = nodes_[id];
            node.distribution = class_counts(rows);
            node.prediction = static_cast<CategoryId>(
                std::max_element(node.distribution.begin(), node.distribution.end()) - node.distribution.begin());
        }
        const auto& dist = nodes_[id].distribution;
        const bool pure = std::count_if(dist.begin(), dist.end(), [](std::size_t c) { return c > 0; }) <= 1;
        if (pure || rows.size() < 2 * params_.min_leaf || (params_.max_depth && depth >= *params_.max_depth))
            return {};

        Candidate best_ratio, best_gain;
        for (std::size_t attr : attributes_) {
            const bool nominal = ds_.column(attr).kind() == ColumnKind::nominal;
            if (nominal && used[attr]) continue;
            const Candidate c = nominal ? evaluate_nominal(attr, rows) : evaluate_numeric(attr, rows);
            if (!c.valid) continue;
            if (!best_ratio.valid || c.ratio > best_ratio.ratio + gain_epsilon) best_ratio = c;
            if (!best_gain.valid || c.gain > best_gain.gain + gain_epsilon) best_gain = c;
        }
        if (!best_ratio.valid) return {};
        // Every ratio is zero on an impure node (XOR-like data): fall back to raw gain.
        const Candidate& chosen = best_ratio.ratio > gain_epsilon ? best_ratio : best_gain;
        return split(id, chosen, rows);
    }

    std::vector<std::pair<std::size_t, std::vector<std::size_t>>> split(std::size_t id, const Candidate& c,
                                                                          const std::vector<std::size_t>& rows) {
        const std::size_t attr = c.attribute;
        const bool nominal = ds_.column(attr).kind() == ColumnKind::nominal;
        const std::size_t branches = nominal ? ds_.column(attr).category_count() : 2;
        std::vector<std::vector<std::size_t>> parts(branches);
        std::vector<std::size_t> missing;
        for (std::size_t r : rows) {
            const Cell& x = ds_.at(r, attr);
            if (x.missing()) missing.push_back(r);
            else if (nominal) parts[static_cast<std::size_t>(x.category())].push_back(r);
            else parts[x.number() <= c.threshold ? 0 : 1].push_back(r);
        }
        std::size_t default_branch = 0;
        for (std::size_t b = 1; b < branches; ++b)
            if (parts[b].size() > parts[default_branch].size()) default_branch = b;
        if (!missing.empty()) {
            auto& d = parts[default_branch];
            d.insert(d.end(), missing.begin(), missing.end());
            std::sort(d.begin(), d.end());
        }

        std::vector<std::int32_t> children(branches, -1);
        std::vector<std::pair<std::size_t, std::vector<std::size_t>>> out;
        for (std::size_t b = 0; b < branches; ++b) {
            if (parts[b].empty()) continue;
            children[b] = static_cast<std::int32_t>(nodes_.size());
            nodes_.emplace_back();
            out.emplace_back(nodes_.size() - 1, std::move(parts[b]));
        }
        TreeNode& node = nodes_[id];
        node.kind = nominal ? TreeNode::Kind::nominal : TreeNode::Kind::numeric;
        node.attribute = attr;
        node.threshold = nominal ? 0.0 : c.threshold;
        node.default_child = children[default_branch];
        if (!nominal)
            for (auto& ch : children)
                if (ch < 0) ch = node.default_child;
        node.children = std::move(children);
        return out;
    }

    const Dataset& ds_;
    TreeParams params_;
    std::size_t label_;
    std::size_t classes_;
    std::vector<std::size_t> attributes_;
    std::vector<TreeNode> nodes_;
};

} // namespace

DecisionTreeModel train_decision_tree(const Dataset& train, const TreeParams& params) {
    const std::size_t label = train.label_index();
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < train.rows(); ++r)
        if (!train.at(r, label).missing()) rows.push_back(r);
    if (rows.empty()) throw TrainingError("decision tree: empty training set");
    TreeParams p = params;
    p.min_leaf = std::max<std::size_t>(1, p.min_leaf);
    TreeBuilder builder(train, p);
    return DecisionTreeModel(train.columns(), label, p, builder.build(std::move(rows)));
}

} // namespace strata
