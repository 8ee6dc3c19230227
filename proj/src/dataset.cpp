#include "strata/dataset.hpp"

#include "strata/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <unordered_set>

namespace strata {

std::string_view to_string(ColumnKind kind) {
    return kind == ColumnKind::nominal ? "nominal" : "numeric";
}

ColumnKind parse_column_kind(std::string_view text) {
    if (text == "nominal") return ColumnKind::nominal;
    if (text == "numeric") return ColumnKind::numeric;
    throw FormatError("unknown column kind '" + std::string(text) + "'");
}

Column::Column(std::string name, ColumnKind kind, std::string group)
    : name_(std::move(name)), kind_(kind), group_(std::move(group)) {}

const std::string& Column::category_name(CategoryId id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= categories_.size())
        throw SchemaError("column '" + name_ + "': category id " + std::to_string(id) +
                          " not registered");
    return categories_[static_cast<std::size_t>(id)];
}

std::optional<CategoryId> Column::find(std::string_view category) const {
    auto it = index_.find(std::string(category));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

CategoryId Column::intern(std::string_view category) {
    auto [it, inserted] =
        index_.try_emplace(std::string(category), static_cast<CategoryId>(categories_.size()));
    if (inserted) categories_.emplace_back(category);
    return it->second;
}

Dataset::Dataset(std::vector<Column> columns) : columns_(std::move(columns)), arity_(columns_.size()) {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (!index_.emplace(columns_[i].name(), i).second)
            throw SchemaError("duplicate column name '" + columns_[i].name() + "'");
    }
}

std::optional<std::size_t> Dataset::find_column(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::size_t Dataset::column_index(std::string_view name) const {
    if (auto i = find_column(name)) return *i;
    throw SchemaError("no column named '" + std::string(name) + "'");
}

CategoryId Dataset::intern(std::size_t column, std::string_view category) {
    return columns_.at(column).intern(category);
}

void Dataset::add_row(std::span<const Cell> cells) {
    if (cells.size() != arity_)
        throw SchemaError("row has " + std::to_string(cells.size()) + " cells, schema has " +
                          std::to_string(arity_));
    for (std::size_t c = 0; c < arity_; ++c) {
        const Cell& cell = cells[c];
        if (cell.missing()) continue;
        const Column& col = columns_[c];
        if (col.kind() == ColumnKind::nominal) {
            if (!cell.is_nominal() || cell.category() < 0 ||
                static_cast<std::size_t>(cell.category()) >= col.category_count())
                throw SchemaError("column '" + col.name() + "': cell is not a registered category");
        } else if (!cell.is_numeric()) {
            throw SchemaError("column '" + col.name() + "': expected a numeric cell");
        }
    }
    cells_.insert(cells_.end(), cells.begin(), cells.end());
}

void Dataset::set_label(std::string name) {
    const std::size_t i = column_index(name);
    if (columns_[i].kind() != ColumnKind::nominal)
        throw SchemaError("label column '" + name + "' must be nominal");
    label_ = std::move(name);
}

std::size_t Dataset::label_index() const {
    if (!label_) throw SchemaError("dataset has no label column");
    return column_index(*label_);
}

Dataset Dataset::empty_like() const {
    Dataset out;
    out.columns_ = columns_;
    out.index_ = index_;
    out.arity_ = arity_;
    out.label_ = label_;
    return out;
}

Dataset Dataset::select_rows(std::span<const std::size_t> indices) const {
    Dataset out = empty_like();
    out.cells_.reserve(indices.size() * arity_);
    for (std::size_t i : indices) {
        auto r = row(i);
        out.cells_.insert(out.cells_.end(), r.begin(), r.end());
    }
    return out;
}

Dataset Dataset::drop_columns(const std::vector<std::string>& names) const {
    std::unordered_set<std::string> drop(names.begin(), names.end());
    std::vector<std::string> keep;
    for (const auto& c : columns_)
        if (!drop.contains(c.name())) keep.push_back(c.name());
    return project(keep);
}

Dataset Dataset::project(const std::vector<std::string>& names) const {
    std::vector<std::size_t> src;
    std::vector<Column> cols;
    for (const auto& n : names) {
        src.push_back(column_index(n));
        cols.push_back(columns_[src.back()]);
    }
    Dataset out(std::move(cols));
    if (label_ && out.find_column(*label_)) out.label_ = label_;
    out.cells_.reserve(rows() * src.size());
    for (std::size_t r = 0; r < rows(); ++r)
        for (std::size_t c : src) out.cells_.push_back(at(r, c));
    return out;
}

Dataset Dataset::with_column(Column column, std::span<const Cell> values) const {
    if (values.size() != rows())
        throw SchemaError("new column '" + column.name() + "' has " + std::to_string(values.size()) +
                          " values for " + std::to_string(rows()) + " rows");
    std::vector<Column> cols = columns_;
    cols.push_back(std::move(column));
    Dataset out(std::move(cols));
    out.label_ = label_;
    out.cells_.reserve(rows() * out.arity_);
    for (std::size_t r = 0; r < rows(); ++r) {
        auto src = row(r);
        out.cells_.insert(out.cells_.end(), src.begin(), src.end());
        out.cells_.push_back(values[r]);
    }
    return out;
}

std::string Dataset::format_cell(std::size_t col, const Cell& cell) const {
    if (cell.missing()) return {};
    if (cell.is_nominal()) return columns_.at(col).category_name(cell.category());
    return format_number(cell.number());
}

bool operator==(const Dataset& a, const Dataset& b) {
    if (a.arity_ != b.arity_ || a.label_ != b.label_ || a.cells_ != b.cells_) return false;
    for (std::size_t i = 0; i < a.columns_.size(); ++i) {
        const Column& x = a.columns_[i];
        const Column& y = b.columns_[i];
        if (x.name() != y.name() || x.kind() != y.kind() || x.group() != y.group() ||
            x.categories() != y.categories())
            return false;
    }
    return true;
}

Dataset conform(const Dataset& ds, const std::vector<Column>& target) {
    std::vector<std::size_t> src;
    for (const auto& col : target) {
        const std::size_t i = ds.column_index(col.name());
        if (ds.column(i).kind() != col.kind())
            throw SchemaError("column '" + col.name() + "' kind differs from the expected schema");
        src.push_back(i);
    }
    Dataset out(target);
    if (ds.label() && out.find_column(*ds.label())) out.set_label(*ds.label());
    // Per column: source category id -> target category id.
    std::vector<std::vector<CategoryId>> remap(target.size());
    for (std::size_t c = 0; c < target.size(); ++c) {
        const Column& from = ds.column(src[c]);
        if (from.kind() != ColumnKind::nominal) continue;
        for (const auto& name : from.categories()) remap[c].push_back(out.intern(c, name));
    }
    out.reserve(ds.rows());
    std::vector<Cell> buf(target.size());
    for (std::size_t r = 0; r < ds.rows(); ++r) {
        for (std::size_t c = 0; c < target.size(); ++c) {
            const Cell& cell = ds.at(r, src[c]);
            buf[c] = cell.is_nominal() ? Cell::nominal(remap[c][static_cast<std::size_t>(cell.category())])
                                       : cell;
        }
        out.add_row(buf);
    }
    return out;
}

std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(' ');
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(' ');
    return s.substr(first, last - first + 1);
}

std::optional<double> parse_number(std::string_view text) {
    text = trim(text);
    if (text.empty()) return std::nullopt;
    if (text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || !std::isfinite(v))
        return std::nullopt;
    return v;
}

} // namespace strata
