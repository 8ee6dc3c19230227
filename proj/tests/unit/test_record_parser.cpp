#include "support.hpp"

#include "strata/error.hpp"
#include "strata/io.hpp"
#include "strata/record_parser.hpp"
#include "strata/rng.hpp"

#include <doctest.h>

#include <sstream>

using namespace strata;

namespace {

const char* two_fields = "record_length=5\n"
                         "str|1|4|nominal|survival\n"
                         "sex|5|1|nominal|demographic\n";

std::string error_of(std::string_view text) {
    try {
        load_dictionary(text);
    } catch (const DictionaryError& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST_CASE("minimal dictionary loads") {
    const auto d = load_dictionary("record_length=5\nage|1|4|numeric|demographic\nsex|5|1|nominal|demographic\n");
    CHECK(d.record_length == 5);
    REQUIRE(d.fields.size() == 2);
    CHECK(d.fields[0].kind == ColumnKind::numeric);
    CHECK(d.fields[1].offset == 5);
    CHECK(d.fields[1].category == "demographic");
}

TEST_CASE("dictionary errors carry line numbers") {
    const auto overlap = error_of("record_length=5\na|1|2|nominal|\nb|1|1|nominal|\n");
    CHECK(overlap.find("line 3") != std::string::npos);
    CHECK(overlap.find("'a'") != std::string::npos);
    CHECK(overlap.find("'b'") != std::string::npos);

    CHECK(error_of("record_length=5\na|1|2|nominal|\na|3|1|nominal|\n").find("line 3: duplicate") != std::string::npos);
    CHECK(error_of("record_length=5\na|4|3|nominal|\n").find("line 2") != std::string::npos);
    CHECK(error_of("record_length=5\na|1|x|nominal|\n").find("line 2") != std::string::npos);
    CHECK(error_of("record_length=5\na|1|1|colour|\n").find("line 2") != std::string::npos);
    CHECK(error_of("record_length=5\na|0|1|nominal|\n").find("line 2") != std::string::npos);
    CHECK(!error_of("a|1|1|nominal|\n").empty());
    CHECK(!error_of("record_length=5\nrecord_length=6\n").empty());
}

TEST_CASE("254-character, 118-field layout is accepted") {
    const auto d = load_dictionary(read_file(STRATA_FIXTURES "/synthetic_254x118.dict"));
    CHECK(d.record_length == 254);
    CHECK(d.fields.size() == 118);
    CHECK(load_dictionary(format_dictionary(d)).fields.size() == 118);

    std::vector<FieldValue> values;
    Rng rng(1);
    for (const auto& f : d.fields) {
        if (f.name == "str") values.emplace_back(std::string("0211"));
        else if (f.name == "vsr") values.emplace_back(std::string("dead"));
        else if (f.kind == ColumnKind::numeric) values.emplace_back(static_cast<double>(rng.below(10)));
        else values.emplace_back(std::string(1, static_cast<char>('a' + rng.below(26))));
    }
    const auto line = format_record(values, d);
    CHECK(line.size() == 254);
    const std::vector<std::string> lines{line};
    const auto parsed = parse_records(lines, d);
    CHECK(parsed.dataset.rows() == 1);
    CHECK(parsed.dataset.arity() == 118);
    CHECK(test::text(parsed.dataset, 0, "str") == "0211");
    CHECK(test::text(parsed.dataset, 0, "vsr") == "dead");
}

TEST_CASE("fixed-width slicing") {
    const auto d = load_dictionary(two_fields);
    const std::vector<std::string> lines{"0211M"};
    const auto r = parse_records(lines, d);
    REQUIRE(r.dataset.rows() == 1);
    CHECK(test::text(r.dataset, 0, "str") == "0211");
    CHECK(test::text(r.dataset, 0, "sex") == "M");
}

TEST_CASE("short lines are rejected with their index") {
    const auto d = load_dictionary(two_fields);
    const std::vector<std::string> lines{"021"};
    const auto r = parse_records(lines, d);
    CHECK(r.dataset.rows() == 0);
    CHECK(r.rejected == 1);
    REQUIRE(r.errors.size() == 1);
    CHECK(r.errors[0].line == 0);
}

TEST_CASE("long lines are accepted and counted") {
    const auto d = load_dictionary(two_fields);
    const std::vector<std::string> lines{"0211M   filler", "0100F"};
    const auto r = parse_records(lines, d);
    CHECK(r.dataset.rows() == 2);
    CHECK(r.long_lines == 1);
}

TEST_CASE("apply_recode: missing codes, recode maps and unknown codes") {
    FieldSpec f;
    f.name = "vsr";
    f.width = 2;
    f.missing_codes = {"99"};
    CHECK(std::holds_alternative<std::monostate>(apply_recode("99", f)));

    FieldSpec v;
    v.name = "vsr";
    v.recode = {{"1", "alive"}, {"4", "dead"}};
    CHECK(std::get<std::string>(apply_recode("1", v)) == "alive");
    try {
        apply_recode("7", v);
        FAIL("expected UnknownCodeError");
    } catch (const UnknownCodeError& e) {
        CHECK(e.field() == "vsr");
        CHECK(e.raw() == "7");
    }

    FieldSpec n;
    n.name = "age";
    n.width = 3;
    n.kind = ColumnKind::numeric;
    CHECK(std::get<double>(apply_recode(" 42", n)) == 42.0);
    CHECK(std::get<double>(apply_recode("1.5", n)) == 1.5);
    CHECK(std::holds_alternative<std::monostate>(apply_recode("   ", n)));
    CHECK_THROWS_AS(apply_recode("4x2", n), ParseError);
}

TEST_CASE("numeric parse errors name the field and line") {
    const auto d = load_dictionary("record_length=3\nage|1|3|numeric|demographic|missing=999\n");
    const std::vector<std::string> lines{"042", "abc", "999"};
    const auto r = parse_records(lines, d);
    CHECK(r.dataset.rows() == 2);
    REQUIRE(r.errors.size() == 1);
    CHECK(r.errors[0].line == 1);
    CHECK(r.errors[0].field == "age");
    CHECK(r.dataset.at(1, 0).missing());
}

TEST_CASE("embedded spaces are significant, edges are trimmed") {
    const auto d = load_dictionary("record_length=6\nsite|1|6|nominal|site\n");
    const std::vector<std::string> lines{" a b  "};
    CHECK(test::text(parse_records(lines, d).dataset, 0, "site") == "a b");
}

namespace {

struct Generated {
    DataDictionary dict;
    std::vector<std::vector<FieldValue>> rows;
    std::vector<std::string> lines;
};

Generated generate_lines(std::uint64_t seed, std::size_t count, bool with_bad_lines) {
    Generated g;
    g.dict = load_dictionary("record_length=12\n"
                             "str|1|4|nominal|survival|missing=9999\n"
                             "vsr|5|1|nominal|survival|recode=1:alive,4:dead|missing=9\n"
                             "age|6|3|numeric|demographic|missing=999\n"
                             "site|10|3|nominal|site\n");
    Rng rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        std::vector<FieldValue> row;
        char str[5];
        std::snprintf(str, sizeof str, "%02zu%02zu", rng.below(100), rng.below(12));
        row.emplace_back(rng.below(10) == 0 ? FieldValue{} : FieldValue{std::string(str)});
        const auto v = rng.below(3);
        row.emplace_back(v == 0 ? FieldValue{} : FieldValue{std::string(v == 1 ? "alive" : "dead")});
        row.emplace_back(rng.below(8) == 0 ? FieldValue{} : FieldValue{static_cast<double>(rng.below(999))});
        row.emplace_back(std::string(1, static_cast<char>('A' + rng.below(5))) + "x");
        auto line = format_record(row, g.dict);
        if (with_bad_lines && rng.below(10) == 0) {
            line = line.substr(0, 7);
        } else if (with_bad_lines && rng.below(10) == 0) {
            line[5] = 'q';
        } else {
            g.rows.push_back(row);
        }
        g.lines.push_back(line);
    }
    return g;
}

} // namespace

TEST_CASE("format then parse round-trips generated rows") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto g = generate_lines(seed, 50, false);
        const auto r = parse_records(g.lines, g.dict);
        REQUIRE(r.rejected == 0);
        REQUIRE(r.dataset.rows() == g.rows.size());
        for (std::size_t i = 0; i < g.rows.size(); ++i)
            for (std::size_t c = 0; c < g.dict.fields.size(); ++c) {
                const auto& want = g.rows[i][c];
                const Cell& got = r.dataset.at(i, c);
                if (std::holds_alternative<std::monostate>(want)) CHECK(got.missing());
                else if (auto* s = std::get_if<std::string>(&want)) CHECK(r.dataset.format_cell(c, got) == *s);
                else CHECK(got.number() == std::get<double>(want));
            }
    }
}

TEST_CASE("batch size does not change the output") {
    const auto g = generate_lines(77, 100, true);
    const auto big = parse_records(g.lines, g.dict, 50000);
    const auto small = parse_records(g.lines, g.dict, 7);
    CHECK(big.dataset == small.dataset);
    CHECK(big.rejected == small.rejected);
    CHECK(big.errors.size() == small.errors.size());
    CHECK(big.dataset.rows() + big.rejected == g.lines.size());

    std::string joined;
    for (const auto& l : g.lines) joined += l + "\r\n";
    std::istringstream in(joined);
    const auto streamed = parse_records(in, g.dict, 3);
    CHECK(streamed.dataset == big.dataset);
    CHECK(streamed.rejected == big.rejected);
    for (std::size_t i = 0; i < big.errors.size(); ++i) CHECK(streamed.errors[i].line == big.errors[i].line);

    CHECK_THROWS_AS(parse_records(g.lines, g.dict, 0), ParseError);
}
