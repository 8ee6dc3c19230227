#include "strata/record_parser.hpp"

#include "strata/config.hpp"
#include "strata/error.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <optional>
#include <unordered_set>

namespace strata {

const std::string* FieldSpec::recode_lookup(std::string_view raw) const {
    for (const auto& [from, to] : recode)
        if (from == raw) return &to;
    return nullptr;
}

Dataset DataDictionary::make_dataset() const {
    std::vector<Column> cols;
    cols.reserve(fields.size());
    for (const auto& f : fields) {
        Column col(f.name, f.kind, f.category);
        if (f.kind == ColumnKind::nominal)
            for (const auto& [from, to] : f.recode) col.intern(to);
        cols.push_back(std::move(col));
    }
    return Dataset(std::move(cols));
}

namespace {

std::optional<std::size_t> parse_count(std::string_view s) {
    s = trim(s);
    std::size_t v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

FieldSpec parse_field_line(std::string_view line, std::size_t line_no) {
    auto parts = split_list(line, '|');
    if (parts.size() < 5)
        throw DictionaryError(line_no, "expected name|offset|width|kind|category, got " +
                                           std::to_string(parts.size()) + " segments");
    FieldSpec f;
    f.name = parts[0];
    if (f.name.empty()) throw DictionaryError(line_no, "empty field name");
    auto offset = parse_count(parts[1]);
    auto width = parse_count(parts[2]);
    if (!offset || *offset < 1) throw DictionaryError(line_no, "field '" + f.name + "': offset must be an integer >= 1");
    if (!width || *width < 1) throw DictionaryError(line_no, "field '" + f.name + "': width must be an integer >= 1");
    f.offset = *offset;
    f.width = *width;
    try {
        f.kind = parse_column_kind(parts[3]);
    } catch (const FormatError& e) {
        throw DictionaryError(line_no, "field '" + f.name + "': " + e.what());
    }
    f.category = parts[4];
    for (std::size_t i = 5; i < parts.size(); ++i) {
        std::string_view seg = parts[i];
        if (seg.starts_with("missing=")) {
            for (auto& code : split_list(seg.substr(8))) f.missing_codes.insert(std::move(code));
        } else if (seg.starts_with("recode=")) {
            for (const auto& pair : split_list(seg.substr(7))) {
                const auto colon = pair.find(':');
                if (colon == std::string::npos)
                    throw DictionaryError(line_no, "field '" + f.name + "': recode entry '" + pair + "' lacks ':'");
                std::string from(trim(pair.substr(0, colon)));
                std::string to(trim(pair.substr(colon + 1)));
                if (f.recode_lookup(from))
                    throw DictionaryError(line_no, "field '" + f.name + "': recode key '" + from + "' repeated");
                f.recode.emplace_back(std::move(from), std::move(to));
            }
        } else {
            throw DictionaryError(line_no, "field '" + f.name + "': unknown segment '" + std::string(seg) + "'");
        }
    }
    return f;
}

} // namespace

DataDictionary load_dictionary(std::string_view text) {
    DataDictionary dict;
    std::optional<std::size_t> record_length;
    std::vector<std::size_t> field_lines;
    std::unordered_set<std::string> names;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() : eol + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.remove_suffix(1);
        while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
        if (line.empty()) continue;

        if (line.starts_with("record_length")) {
            const auto eq = line.find('=');
            auto n = eq == std::string_view::npos ? std::nullopt : parse_count(line.substr(eq + 1));
            if (!n || *n < 1) throw DictionaryError(line_no, "record_length must be a positive integer");
            if (record_length) throw DictionaryError(line_no, "record_length declared twice");
            record_length = *n;
            continue;
        }
        FieldSpec f = parse_field_line(line, line_no);
        if (!names.insert(f.name).second)
            throw DictionaryError(line_no, "duplicate field name '" + f.name + "'");
        dict.fields.push_back(std::move(f));
        field_lines.push_back(line_no);
    }
    if (!record_length) throw DictionaryError(line_no, "missing record_length header");
    dict.record_length = *record_length;

    for (std::size_t i = 0; i < dict.fields.size(); ++i) {
        const auto& f = dict.fields[i];
        if (f.offset + f.width - 1 > dict.record_length)
            throw DictionaryError(field_lines[i], "field '" + f.name + "' ends at " +
                                                      std::to_string(f.offset + f.width - 1) +
                                                      ", beyond record_length " + std::to_string(dict.record_length));
    }
    std::vector<std::size_t> order(dict.fields.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return dict.fields[a].offset < dict.fields[b].offset; });
    for (std::size_t k = 1; k < order.size(); ++k) {
        const auto& prev = dict.fields[order[k - 1]];
        const auto& cur = dict.fields[order[k]];
        if (cur.offset < prev.offset + prev.width) {
            const std::size_t later = std::max(field_lines[order[k - 1]], field_lines[order[k]]);
            throw DictionaryError(later, "fields '" + prev.name + "' and '" + cur.name + "' overlap");
        }
    }
    return dict;
}

std::string format_dictionary(const DataDictionary& dict) {
    std::string out = "record_length=" + std::to_string(dict.record_length) + "\n";
    for (const auto& f : dict.fields) {
        out += f.name + "|" + std::to_string(f.offset) + "|" + std::to_string(f.width) + "|" +
               std::string(to_string(f.kind)) + "|" + f.category;
        if (!f.missing_codes.empty()) {
            out += "|missing=";
            bool first = true;
            for (const auto& c : f.missing_codes) {
                if (!first) out += ',';
                out += c;
                first = false;
            }
        }
        if (!f.recode.empty()) {
            out += "|recode=";
            for (std::size_t i = 0; i < f.recode.size(); ++i) {
                if (i) out += ',';
                out += f.recode[i].first + ":" + f.recode[i].second;
            }
        }
        out += '\n';
    }
    return out;
}

FieldValue apply_recode(std::string_view raw, const FieldSpec& spec) {
    const std::string_view text = trim(raw);
    if (spec.missing_codes.contains(std::string(text))) return std::monostate{};
    std::string_view value = text;
    if (!spec.recode.empty()) {
        const std::string* mapped = spec.recode_lookup(text);
        if (!mapped) throw UnknownCodeError(spec.name, std::string(text));
        value = *mapped;
    }
    if (value.empty()) return std::monostate{};
    if (spec.kind == ColumnKind::nominal) return std::string(value);
    if (auto n = parse_number(value)) return *n;
    throw ParseError("field '" + spec.name + "': '" + std::string(value) + "' is not numeric");
}

namespace {

class BatchParser {
public:
    explicit BatchParser(const DataDictionary& dict) : dict_(dict) {
        result_.dataset = dict.make_dataset();
        cells_.resize(dict.fields.size());
    }

    void consume(std::span<const std::string> batch, std::size_t first_index) {
        for (std::size_t i = 0; i < batch.size(); ++i) parse_line(batch[i], first_index + i);
    }

    ParseResult finish() { return std::move(result_); }

private:
    void reject(std::size_t index, std::string field, std::string message) {
        result_.errors.push_back({index, std::move(field), std::move(message)});
        ++result_.rejected;
    }

    void parse_line(std::string_view line, std::size_t index) {
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.size() < dict_.record_length) {
            reject(index, {}, "short line: length " + std::to_string(line.size()) + " < record_length " +
                                  std::to_string(dict_.record_length));
            return;
        }
        values_.clear();
        for (const auto& f : dict_.fields) {
            try {
                values_.push_back(apply_recode(line.substr(f.offset - 1, f.width), f));
            } catch (const ParseError& e) {
                reject(index, f.name, e.what());
                return;
            }
        }
        if (line.size() > dict_.record_length) ++result_.long_lines;
        Dataset& ds = result_.dataset;
        for (std::size_t c = 0; c < values_.size(); ++c) {
            const FieldValue& v = values_[c];
            if (std::holds_alternative<std::monostate>(v))
                cells_[c] = Cell{};
            else if (auto* s = std::get_if<std::string>(&v))
                cells_[c] = Cell::nominal(ds.intern(c, *s));
            else
                cells_[c] = Cell::numeric(std::get<double>(v));
        }
        ds.add_row(cells_);
    }

    const DataDictionary& dict_;
    ParseResult result_;
    std::vector<FieldValue> values_;
    std::vector<Cell> cells_;
};

} // namespace

ParseResult parse_records(std::span<const std::string> lines, const DataDictionary& dict, std::size_t batch_size) {
    if (batch_size == 0) throw ParseError("batch_size must be >= 1");
    BatchParser parser(dict);
    for (std::size_t start = 0; start < lines.size(); start += batch_size)
        parser.consume(lines.subspan(start, std::min(batch_size, lines.size() - start)), start);
    return parser.finish();
}

ParseResult parse_records(std::istream& in, const DataDictionary& dict, std::size_t batch_size) {
    if (batch_size == 0) throw ParseError("batch_size must be >= 1");
    BatchParser parser(dict);
    std::vector<std::string> batch;
    batch.reserve(std::min<std::size_t>(batch_size, 1 << 16));
    std::size_t index = 0;
    std::string line;
    while (std::getline(in, line)) {
        batch.push_back(std::move(line));
        if (batch.size() == batch_size) {
            parser.consume(batch, index);
            index += batch.size();
            batch.clear();
        }
    }
    parser.consume(batch, index);
    return parser.finish();
}

std::string format_record(std::span<const FieldValue> values, const DataDictionary& dict) {
    if (values.size() != dict.fields.size())
        throw FormatError("format_record: " + std::to_string(values.size()) + " values for " +
                          std::to_string(dict.fields.size()) + " fields");
    std::string line(dict.record_length, ' ');
    for (std::size_t i = 0; i < values.size(); ++i) {
        const FieldSpec& f = dict.fields[i];
        std::string text;
        if (std::holds_alternative<std::monostate>(values[i])) {
            if (!f.missing_codes.empty()) text = *f.missing_codes.begin();
        } else {
            text = std::holds_alternative<std::string>(values[i]) ? std::get<std::string>(values[i])
                                                                   : format_number(std::get<double>(values[i]));
            if (!f.recode.empty()) {
                auto it = std::find_if(f.recode.begin(), f.recode.end(),
                                       [&](const auto& p) { return p.second == text; });
                if (it == f.recode.end())
                    throw FormatError("field '" + f.name + "': no recode key maps to '" + text + "'");
                text = it->first;
            }
        }
        if (text.size() > f.width)
            throw FormatError("field '" + f.name + "': '" + text + "' wider than " + std::to_string(f.width));
        line.replace(f.offset - 1, text.size(), text);
    }
    return line;
}

} // namespace strata
