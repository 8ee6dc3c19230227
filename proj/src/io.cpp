#include "strata/io.hpp"

#include "strata/error.hpp"

#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

namespace strata {

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string csv_join(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += csv_escape(fields[i]);
    }
    return out;
}

std::vector<std::vector<std::string>> csv_parse(std::string_view text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    bool field_started = false;
    std::size_t i = 0;
    auto end_record = [&] {
        record.push_back(std::move(field));
        field.clear();
        records.push_back(std::move(record));
        record.clear();
        field_started = false;
    };
    while (i < text.size()) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
            field_started = true;
        } else if (c == ',') {
            record.push_back(std::move(field));
            field.clear();
            field_started = true;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            end_record();
        } else {
            field += c;
            field_started = true;
        }
        ++i;
    }
    if (quoted) throw FormatError("csv: unterminated quoted field");
    if (field_started || !record.empty()) end_record();
    return records;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    auto tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw IoError("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw IoError("cannot rename into '" + path.string() + "': " + ec.message());
    }
}

std::filesystem::path schema_path(const std::filesystem::path& csv) {
    auto p = csv;
    p += ".schema";
    return p;
}

std::string dataset_to_csv(const Dataset& ds) {
    std::string out;
    std::vector<std::string> fields;
    for (const auto& c : ds.columns()) fields.push_back(c.name());
    out += csv_join(fields) + '\n';
    for (std::size_t r = 0; r < ds.rows(); ++r) {
        fields.clear();
        for (std::size_t c = 0; c < ds.arity(); ++c) fields.push_back(ds.format_cell(c, ds.at(r, c)));
        out += csv_join(fields) + '\n';
    }
    return out;
}

std::string schema_to_csv(const Dataset& ds) {
    std::string out = "name,kind,group,label,category\n";
    for (const auto& c : ds.columns()) {
        const std::string is_label = ds.label() == c.name() ? "1" : "0";
        const std::vector<std::string> base{c.name(), std::string(to_string(c.kind())), c.group(), is_label};
        if (c.kind() == ColumnKind::numeric || c.categories().empty()) {
            auto f = base;
            f.emplace_back();
            out += csv_join(f) + '\n';
            continue;
        }
        for (const auto& cat : c.categories()) {
            auto f = base;
            f.push_back(cat);
            out += csv_join(f) + '\n';
        }
    }
    return out;
}

Dataset dataset_from_csv(std::string_view data_csv, std::string_view schema_csv) {
    auto schema = csv_parse(schema_csv);
    if (schema.empty() || schema.front() != std::vector<std::string>{"name", "kind", "group", "label", "category"})
        throw FormatError("schema sidecar: missing or malformed header");
    std::vector<Column> columns;
    std::string label;
    for (std::size_t i = 1; i < schema.size(); ++i) {
        const auto& rec = schema[i];
        if (rec.size() != 5)
            throw FormatError("schema sidecar line " + std::to_string(i + 1) + ": expected 5 fields");
        if (columns.empty() || columns.back().name() != rec[0])
            columns.emplace_back(rec[0], parse_column_kind(rec[1]), rec[2]);
        if (rec[3] == "1") label = rec[0];
        if (columns.back().kind() == ColumnKind::nominal && !rec[4].empty())
            columns.back().intern(rec[4]);
    }

    Dataset ds(std::move(columns));
    auto records = csv_parse(data_csv);
    if (records.empty()) throw FormatError("csv: missing header row");
    std::vector<std::size_t> order;
    if (records.front().size() != ds.arity())
        throw FormatError("csv header has " + std::to_string(records.front().size()) +
                          " columns, schema has " + std::to_string(ds.arity()));
    for (std::size_t i = 0; i < ds.arity(); ++i) {
        if (records.front()[i] != ds.column(i).name())
            throw FormatError("csv header column " + std::to_string(i + 1) + " is '" + records.front()[i] +
                              "', schema says '" + ds.column(i).name() + "'");
    }
    ds.reserve(records.size() - 1);
    std::vector<Cell> cells(ds.arity());
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.size() != ds.arity())
            throw FormatError("csv line " + std::to_string(r + 1) + ": expected " +
                              std::to_string(ds.arity()) + " fields, got " + std::to_string(rec.size()));
        for (std::size_t c = 0; c < ds.arity(); ++c) {
            const std::string& v = rec[c];
            if (v.empty()) {
                cells[c] = Cell{};
            } else if (ds.column(c).kind() == ColumnKind::nominal) {
                cells[c] = Cell::nominal(ds.intern(c, v));
            } else {
                auto num = parse_number(v);
                if (!num)
                    throw FormatError("csv line " + std::to_string(r + 1) + ", column '" +
                                      ds.column(c).name() + "': '" + v + "' is not numeric");
                cells[c] = Cell::numeric(*num);
            }
        }
        ds.add_row(cells);
    }
    if (!label.empty()) ds.set_label(label);
    return ds;
}

void write_dataset(const Dataset& ds, const std::filesystem::path& csv) {
    write_file_atomic(schema_path(csv), schema_to_csv(ds));
    write_file_atomic(csv, dataset_to_csv(ds));
}

Dataset read_dataset(const std::filesystem::path& csv) {
    return dataset_from_csv(read_file(csv), read_file(schema_path(csv)));
}

} // namespace strata
