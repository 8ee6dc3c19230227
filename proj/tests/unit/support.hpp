#pragma once

#include "strata/dataset.hpp"

#include <filesystem>
#include <initializer_list>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace test {

struct Col {
    std::string name;
    strata::ColumnKind kind = strata::ColumnKind::nominal;
    std::string group = {};
};

/// Rows of text: numeric columns parse as numbers, "" is missing.
inline strata::Dataset table(const std::vector<Col>& cols, const std::vector<std::vector<std::string>>& rows,
                             const std::string& label = {}) {
    std::vector<strata::Column> schema;
    for (const auto& c : cols) schema.emplace_back(c.name, c.kind, c.group);
    strata::Dataset ds(schema);
    for (const auto& r : rows) {
        std::vector<strata::Cell> cells;
        for (std::size_t i = 0; i < cols.size(); ++i) {
            if (r.at(i).empty()) cells.emplace_back();
            else if (cols[i].kind == strata::ColumnKind::numeric) cells.push_back(strata::Cell::numeric(std::stod(r[i])));
            else cells.push_back(strata::Cell::nominal(ds.intern(i, r[i])));
        }
        ds.add_row(cells);
    }
    if (!label.empty()) ds.set_label(label);
    return ds;
}

/// Label column "y" only, with the given class sizes in order A, B, C, ...
inline strata::Dataset class_sizes(const std::vector<std::size_t>& sizes) {
    strata::Dataset ds({strata::Column("id", strata::ColumnKind::numeric), strata::Column("y", strata::ColumnKind::nominal)});
    for (std::size_t c = 0; c < sizes.size(); ++c) ds.intern(1, std::string(1, static_cast<char>('A' + c)));
    std::size_t id = 0;
    for (std::size_t c = 0; c < sizes.size(); ++c)
        for (std::size_t i = 0; i < sizes[c]; ++i) {
            strata::Cell cells[] = {strata::Cell::numeric(static_cast<double>(id++)),
                                    strata::Cell::nominal(static_cast<strata::CategoryId>(c))};
            ds.add_row(cells);
        }
    ds.set_label("y");
    return ds;
}

inline std::string text(const strata::Dataset& ds, std::size_t r, const std::string& col) {
    const auto c = ds.column_index(col);
    return ds.format_cell(c, ds.at(r, c));
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        path_ = std::filesystem::temp_directory_path() /
                ("strata-" + tag + "-" + std::to_string(std::random_device{}()));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

} // namespace test
