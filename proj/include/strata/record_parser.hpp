#pragma once

#include "strata/dataset.hpp"

#include <cstddef>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace strata {

/// Positional layout of one attribute in a fixed-width record.
struct FieldSpec {
    std::string name;
    std::size_t offset = 1; // 1-based
    std::size_t width = 1;
    ColumnKind kind = ColumnKind::nominal;
    std::string category;   // group tag consumed by the correlation filter
    std::set<std::string> missing_codes;
    // Declaration order is kept: recode targets become categories in this order.
    std::vector<std::pair<std::string, std::string>> recode;

    const std::string* recode_lookup(std::string_view raw) const;
};

struct DataDictionary {
    std::size_t record_length = 0;
    std::vector<FieldSpec> fields;

    /// Empty dataset whose columns mirror the fields.
    Dataset make_dataset() const;
};

/// Parses and validates the line-based dictionary format:
///
///     record_length=N
///     name|offset|width|kind|category|missing=c1,c2|recode=a:b,c:d
///
/// The missing= and recode= segments are optional, `#` starts a comment.
DataDictionary load_dictionary(std::string_view text);
std::string format_dictionary(const DataDictionary& dict);

/// A parsed field before category interning.
using FieldValue = std::variant<std::monostate, std::string, double>;

/// Missing codes, then recode map, then trimmed text (nominal) or a number
/// (numeric). Throws UnknownCodeError or ParseError.
FieldValue apply_recode(std::string_view raw, const FieldSpec& spec);

struct LineError {
    std::size_t line = 0; // 0-based input index
    std::string field;    // empty for whole-line errors
    std::string message;
};

struct ParseResult {
    Dataset dataset;
    std::vector<LineError> errors;
    std::size_t rejected = 0;
    std::size_t long_lines = 0;
};

constexpr std::size_t default_batch_size = 50000;

/// Parses lines in batches of at most batch_size. Bad lines are rejected and
/// reported; parsing continues. Output does not depend on batch_size.
ParseResult parse_records(std::span<const std::string> lines, const DataDictionary& dict,
                          std::size_t batch_size = default_batch_size);
/// Streaming variant: holds at most batch_size unparsed lines at a time.
ParseResult parse_records(std::istream& in, const DataDictionary& dict,
                          std::size_t batch_size = default_batch_size);

/// Inverse of parsing for one row of field values: right-pads each value to
/// its width and fills gaps with spaces. Missing cells use the first missing
/// code. Recode maps are inverted, so they must be bijective.
std::string format_record(std::span<const FieldValue> values, const DataDictionary& dict);

} // namespace strata
