#include "strata/classifier.hpp"

#include "strata/error.hpp"
#include "strata/io.hpp"

#include <charconv>
#include <optional>

namespace strata {

std::string_view to_string(ClassifierKind kind) {
    switch (kind) {
    case ClassifierKind::decision_tree: return "decision_tree";
    case ClassifierKind::naive_bayes: return "naive_bayes";
    case ClassifierKind::knn: return "knn";
    }
    return "decision_tree";
}

std::string_view short_name(ClassifierKind kind) {
    switch (kind) {
    case ClassifierKind::decision_tree: return "DT";
    case ClassifierKind::naive_bayes: return "NB";
    case ClassifierKind::knn: return "KNN";
    }
    return "DT";
}

ClassifierKind parse_classifier(std::string_view text) {
    if (text == "decision_tree" || text == "dt") return ClassifierKind::decision_tree;
    if (text == "naive_bayes" || text == "nb") return ClassifierKind::naive_bayes;
    if (text == "knn") return ClassifierKind::knn;
    throw ConfigError("unknown classifier '" + std::string(text) + "'");
}

Model train_model(ClassifierKind kind, const Dataset& train, const ClassifierParams& params) {
    switch (kind) {
    case ClassifierKind::decision_tree: return train_decision_tree(train, params.tree);
    case ClassifierKind::naive_bayes: return train_naive_bayes(train, params.alpha);
    case ClassifierKind::knn: return train_knn(train, params.knn);
    }
    throw TrainingError("unknown classifier");
}

CategoryId predict(const Model& model, std::span<const Cell> row) {
    return std::visit(
        [&](const auto& m) -> CategoryId {
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>, NaiveBayesModel>) return m.predict(row).first;
            else return m.predict(row);
        },
        model);
}

const std::vector<Column>& model_schema(const Model& model) {
    return std::visit([](const auto& m) -> const std::vector<Column>& { return m.schema(); }, model);
}

std::size_t model_label_index(const Model& model) {
    return std::visit([](const auto& m) { return m.label_index(); }, model);
}

std::vector<CategoryId> predict_all(const Model& model, const Dataset& ds) {
    std::vector<CategoryId> out;
    out.reserve(ds.rows());
    for (std::size_t r = 0; r < ds.rows(); ++r) out.push_back(predict(model, ds.row(r)));
    return out;
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::string_view magic = "strata-model";

void write_header(std::string& out, std::string_view type, const std::vector<Column>& schema, std::size_t label) {
    out += csv_join({std::string(magic), "1"}) + '\n';
    out += csv_join({"type", std::string(type)}) + '\n';
    out += csv_join({"label", std::to_string(label)}) + '\n';
    for (const auto& c : schema) {
        std::vector<std::string> rec{"column", c.name(), std::string(to_string(c.kind())), c.group()};
        rec.insert(rec.end(), c.categories().begin(), c.categories().end());
        out += csv_join(rec) + '\n';
    }
}

std::size_t to_index(const std::string& s) {
    std::size_t v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw FormatError("model file: '" + s + "' is not an index");
    return v;
}

std::int64_t to_signed(const std::string& s) {
    std::int64_t v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw FormatError("model file: '" + s + "' is not an integer");
    return v;
}

double to_double(const std::string& s) {
    auto v = parse_number(s);
    if (!v) throw FormatError("model file: '" + s + "' is not a number");
    return *v;
}

std::string_view node_kind_name(TreeNode::Kind k) {
    switch (k) {
    case TreeNode::Kind::leaf: return "leaf";
    case TreeNode::Kind::nominal: return "nominal";
    case TreeNode::Kind::numeric: return "numeric";
    }
    return "leaf";
}

TreeNode::Kind parse_node_kind(const std::string& s) {
    if (s == "leaf") return TreeNode::Kind::leaf;
    if (s == "nominal") return TreeNode::Kind::nominal;
    if (s == "numeric") return TreeNode::Kind::numeric;
    throw FormatError("model file: unknown node kind '" + s + "'");
}

} // namespace

std::string serialize_model(const Model& model, const std::string& knn_training_path) {
    std::string out;
    if (const auto* t = std::get_if<DecisionTreeModel>(&model)) {
        write_header(out, "decision_tree", t->schema(), t->label_index());
        out += csv_join({"param", "min_leaf", std::to_string(t->params().min_leaf)}) + '\n';
        out += csv_join({"param", "max_depth", t->params().max_depth ? std::to_string(*t->params().max_depth) : ""}) + '\n';
        for (const auto& n : t->nodes()) {
            std::vector<std::string> rec{"node",
                                         std::string(node_kind_name(n.kind)),
                                         std::to_string(n.attribute),
                                         format_number(n.threshold),
                                         std::to_string(n.default_child),
                                         std::to_string(n.prediction),
                                         std::to_string(n.distribution.size())};
            for (auto d : n.distribution) rec.push_back(std::to_string(d));
            for (auto c : n.children) rec.push_back(std::to_string(c));
            out += csv_join(rec) + '\n';
        }
    } else if (const auto* b = std::get_if<NaiveBayesModel>(&model)) {
        write_header(out, "naive_bayes", b->schema(), b->label_index());
        out += csv_join({"param", "alpha", format_number(b->alpha())}) + '\n';
        std::vector<std::string> prior{"prior"};
        for (double p : b->priors()) prior.push_back(format_number(p));
        out += csv_join(prior) + '\n';
        for (const auto& a : b->attributes()) {
            for (std::size_t c = 0; c < b->priors().size(); ++c) {
                if (a.kind == ColumnKind::nominal) {
                    std::vector<std::string> rec{"nominal", std::to_string(a.column), std::to_string(c)};
                    for (double p : a.probability[c]) rec.push_back(format_number(p));
                    out += csv_join(rec) + '\n';
                } else {
                    out += csv_join({"gaussian", std::to_string(a.column), std::to_string(c), format_number(a.mean[c]),
                                     format_number(a.variance[c])}) +
                           '\n';
                }
            }
        }
    } else {
        const auto& k = std::get<KnnModel>(model);
        if (knn_training_path.empty()) throw FormatError("k-NN model needs a training data path to serialize");
        write_header(out, "knn", k.schema(), k.label_index());
        out += csv_join({"param", "k", std::to_string(k.k())}) + '\n';
        out += csv_join({"training", knn_training_path}) + '\n';
    }
    return out;
}

Model deserialize_model(std::string_view text, const std::filesystem::path& base_dir) {
    const auto records = csv_parse(text);
    if (records.empty() || records[0].size() != 2 || records[0][0] != magic)
        throw FormatError("model file: missing strata-model header");
    if (records[0][1] != "1") throw FormatError("model file: unsupported version " + records[0][1]);

    std::string type;
    std::optional<std::size_t> label;
    std::vector<Column> schema;
    TreeParams tree_params;
    std::vector<TreeNode> nodes;
    double alpha = 1.0;
    std::vector<double> priors;
    std::vector<AttributeLikelihood> attributes;
    std::size_t k = 10;
    std::string training_path;

    auto attribute_for = [&](std::size_t column, ColumnKind kind) -> AttributeLikelihood& {
        if (attributes.empty() || attributes.back().column != column) {
            AttributeLikelihood a;
            a.column = column;
            a.kind = kind;
            attributes.push_back(std::move(a));
        }
        return attributes.back();
    };

    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto& r = records[i];
        auto need = [&](std::size_t n) {
            if (r.size() < n)
                throw FormatError("model file record " + std::to_string(i + 1) + ": too few fields");
        };
        need(1);
        const std::string& tag = r[0];
        if (tag == "type") {
            need(2);
            type = r[1];
        } else if (tag == "label") {
            need(2);
            label = to_index(r[1]);
        } else if (tag == "column") {
            need(4);
            Column c(r[1], parse_column_kind(r[2]), r[3]);
            for (std::size_t j = 4; j < r.size(); ++j) c.intern(r[j]);
            schema.push_back(std::move(c));
        } else if (tag == "param") {
            need(3);
            if (r[1] == "min_leaf") tree_params.min_leaf = to_index(r[2]);
            else if (r[1] == "max_depth") tree_params.max_depth = r[2].empty() ? std::nullopt : std::optional(to_index(r[2]));
            else if (r[1] == "alpha") alpha = to_double(r[2]);
            else if (r[1] == "k") k = to_index(r[2]);
            else throw FormatError("model file: unknown parameter '" + r[1] + "'");
        } else if (tag == "node") {
            need(8);
            TreeNode n;
            n.kind = parse_node_kind(r[1]);
            n.attribute = to_index(r[2]);
            n.threshold = to_double(r[3]);
            n.default_child = static_cast<std::int32_t>(to_signed(r[4]));
            n.prediction = static_cast<CategoryId>(to_signed(r[5]));
            const std::size_t nd = to_index(r[6]);
            need(7 + nd);
            for (std::size_t j = 0; j < nd; ++j) n.distribution.push_back(to_index(r[7 + j]));
            for (std::size_t j = 7 + nd; j < r.size(); ++j) n.children.push_back(static_cast<std::int32_t>(to_signed(r[j])));
            nodes.push_back(std::move(n));
        } else if (tag == "prior") {
            for (std::size_t j = 1; j < r.size(); ++j) priors.push_back(to_double(r[j]));
        } else if (tag == "nominal") {
            need(3);
            auto& a = attribute_for(to_index(r[1]), ColumnKind::nominal);
            std::vector<double> probs;
            for (std::size_t j = 3; j < r.size(); ++j) probs.push_back(to_double(r[j]));
            a.probability.push_back(std::move(probs));
        } else if (tag == "gaussian") {
            need(5);
            auto& a = attribute_for(to_index(r[1]), ColumnKind::numeric);
            a.mean.push_back(to_double(r[3]));
            a.variance.push_back(to_double(r[4]));
        } else if (tag == "training") {
            need(2);
            training_path = r[1];
        } else {
            throw FormatError("model file: unknown record '" + tag + "'");
        }
    }
    if (!label || *label >= schema.size()) throw FormatError("model file: missing or invalid label index");

    if (type == "decision_tree") {
        for (const auto& n : nodes)
            for (auto c : n.children)
                if (c >= static_cast<std::int32_t>(nodes.size())) throw FormatError("model file: child index out of range");
        return DecisionTreeModel(std::move(schema), *label, tree_params, std::move(nodes));
    }
    if (type == "naive_bayes") {
        return NaiveBayesModel(std::move(schema), *label, alpha, std::move(priors), std::move(attributes));
    }
    if (type == "knn") {
        if (training_path.empty()) throw FormatError("model file: k-NN model lacks a training record");
        std::filesystem::path p = training_path;
        if (p.is_relative()) p = base_dir / p;
        Dataset train = conform(read_dataset(p), schema);
        train.set_label(schema[*label].name());
        return KnnModel(std::move(train), KnnParams{k});
    }
    throw FormatError("model file: unknown model type '" + type + "'");
}

} // namespace strata
