#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace strata {

enum class ColumnKind : std::uint8_t { nominal, numeric };

std::string_view to_string(ColumnKind kind);
ColumnKind parse_column_kind(std::string_view text);

using CategoryId = std::int32_t;

/// One value of a Dataset: a nominal category id, a real number, or missing.
class Cell {
public:
    Cell() = default;

    static Cell nominal(CategoryId id) {
        Cell c;
        c.tag_ = Tag::nominal;
        c.category_ = id;
        return c;
    }
    static Cell numeric(double v) {
        Cell c;
        c.tag_ = Tag::numeric;
        c.value_ = v;
        return c;
    }

    bool missing() const noexcept { return tag_ == Tag::missing; }
    bool is_nominal() const noexcept { return tag_ == Tag::nominal; }
    bool is_numeric() const noexcept { return tag_ == Tag::numeric; }
    CategoryId category() const noexcept { return category_; }
    double number() const noexcept { return value_; }

    friend bool operator==(const Cell&, const Cell&) = default;

private:
    enum class Tag : std::uint8_t { missing, nominal, numeric };
    Tag tag_ = Tag::missing;
    CategoryId category_ = -1;
    double value_ = 0.0;
};

/// Column metadata. Nominal columns own an ordered category set; the order
/// is the class order used for every tie-break in the library.
class Column {
public:
    Column(std::string name, ColumnKind kind, std::string group = {});

    const std::string& name() const noexcept { return name_; }
    ColumnKind kind() const noexcept { return kind_; }
    const std::string& group() const noexcept { return group_; }
    void set_name(std::string name) { name_ = std::move(name); }

    const std::vector<std::string>& categories() const noexcept { return categories_; }
    std::size_t category_count() const noexcept { return categories_.size(); }
    const std::string& category_name(CategoryId id) const;
    std::optional<CategoryId> find(std::string_view category) const;
    /// Returns the id of category, registering it if new.
    CategoryId intern(std::string_view category);

private:
    std::string name_;
    ColumnKind kind_;
    std::string group_;
    std::vector<std::string> categories_;
    std::unordered_map<std::string, CategoryId> index_;
};

/// Rows of cells over an ordered column schema, with an optional label column.
/// Storage is row-major and contiguous.
class Dataset {
public:
    Dataset() = default;
    explicit Dataset(std::vector<Column> columns);

    std::size_t rows() const noexcept { return arity_ == 0 ? 0 : cells_.size() / arity_; }
    std::size_t arity() const noexcept { return arity_; }
    bool empty() const noexcept { return cells_.empty(); }

    const std::vector<Column>& columns() const noexcept { return columns_; }
    const Column& column(std::size_t i) const { return columns_.at(i); }
    std::optional<std::size_t> find_column(std::string_view name) const;
    /// Throws SchemaError when absent.
    std::size_t column_index(std::string_view name) const;
    CategoryId intern(std::size_t column, std::string_view category);

    std::span<const Cell> row(std::size_t i) const {
        return {cells_.data() + i * arity_, arity_};
    }
    const Cell& at(std::size_t row, std::size_t col) const { return cells_[row * arity_ + col]; }

    /// Validates arity and that nominal ids are registered.
    void add_row(std::span<const Cell> cells);
    void reserve(std::size_t rows) { cells_.reserve(rows * arity_); }

    const std::optional<std::string>& label() const noexcept { return label_; }
    /// The label must name an existing nominal column.
    void set_label(std::string name);
    void clear_label() { label_.reset(); }
    /// Throws SchemaError if no label is set.
    std::size_t label_index() const;

    /// Same schema and label, no rows.
    Dataset empty_like() const;
    /// Rows in the given order; duplicates allowed.
    Dataset select_rows(std::span<const std::size_t> indices) const;
    Dataset drop_columns(const std::vector<std::string>& names) const;
    /// Keeps only the named columns, in the given order.
    Dataset project(const std::vector<std::string>& names) const;
    /// Appends a column filled with the given cells.
    Dataset with_column(Column column, std::span<const Cell> values) const;

    /// Textual value of a cell: category name, shortest round-trip number,
    /// or empty string for missing.
    std::string format_cell(std::size_t col, const Cell& cell) const;

    friend bool operator==(const Dataset& a, const Dataset& b);

private:
    std::vector<Column> columns_;
    std::unordered_map<std::string, std::size_t> index_;
    std::size_t arity_ = 0;
    std::vector<Cell> cells_;
    std::optional<std::string> label_;
};

/// Re-encodes ds onto target's column order and category ids, matching by
/// column name and category text. Categories unknown to target are appended.
Dataset conform(const Dataset& ds, const std::vector<Column>& target);

std::string format_number(double v);
/// Strict decimal parse of trimmed text; nullopt if not fully numeric.
std::optional<double> parse_number(std::string_view text);
std::string_view trim(std::string_view s);

} // namespace strata
