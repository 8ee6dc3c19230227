#include "support.hpp"

#include "strata/config.hpp"
#include "strata/dataset.hpp"
#include "strata/error.hpp"
#include "strata/io.hpp"
#include "strata/parallel.hpp"
#include "strata/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace strata;

TEST_CASE("rng streams are reproducible and seed-sensitive") {
    Rng a(7), b(7), c(8);
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next();
        CHECK(x == b.next());
        (void)c;
    }
    CHECK(Rng(7).next() != Rng(8).next());
    CHECK(mix_seed(1, 2) != mix_seed(2, 1));
    CHECK(hash_string("abc") == hash_string("abc"));
    CHECK(hash_string("abc") != hash_string("abd"));
}

TEST_CASE("rng below stays in range and covers it") {
    Rng rng(3);
    std::vector<int> seen(7, 0);
    for (int i = 0; i < 7000; ++i) {
        const auto v = rng.below(7);
        REQUIRE(v < 7);
        ++seen[v];
    }
    for (int s : seen) CHECK(s > 800);
}

TEST_CASE("rng uniform and normal moments") {
    Rng rng(11);
    double sum = 0, sq = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
    }
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal(2.0, 3.0);
        sum += z;
        sq += z * z;
    }
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    CHECK(mean == doctest::Approx(2.0).epsilon(0.02));
    CHECK(var == doctest::Approx(9.0).epsilon(0.02));
}

TEST_CASE("rng weighted follows the weights") {
    Rng rng(5);
    std::vector<double> w{1, 0, 3};
    std::vector<int> seen(3, 0);
    for (int i = 0; i < 40000; ++i) ++seen[rng.weighted(w)];
    CHECK(seen[1] == 0);
    CHECK(static_cast<double>(seen[2]) / seen[0] == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("sample_indices returns sorted distinct indices") {
    Rng rng(9);
    const auto idx = sample_indices(100, 30, rng);
    CHECK(idx.size() == 30);
    CHECK(std::is_sorted(idx.begin(), idx.end()));
    CHECK(std::set<std::size_t>(idx.begin(), idx.end()).size() == 30);
    CHECK(idx.back() < 100);
    Rng full(1);
    const auto all = sample_indices(5, 5, full);
    CHECK(all == std::vector<std::size_t>{0, 1, 2, 3, 4});
}

TEST_CASE("parallel_for visits every index once and rethrows") {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
    CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
    CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) {
                        if (i == 5) throw SchemaError("boom");
                    }),
                    SchemaError);
}

TEST_CASE("dataset enforces arity, registered categories and label kind") {
    Dataset ds({Column("x", ColumnKind::numeric), Column("y", ColumnKind::nominal)});
    const Cell short_row[] = {Cell::numeric(1)};
    CHECK_THROWS_AS(ds.add_row(short_row), SchemaError);
    const Cell bad_cat[] = {Cell::numeric(1), Cell::nominal(3)};
    CHECK_THROWS_AS(ds.add_row(bad_cat), SchemaError);
    const Cell ok[] = {Cell::numeric(1), Cell::nominal(ds.intern(1, "a"))};
    ds.add_row(ok);
    CHECK(ds.rows() == 1);
    CHECK_THROWS_AS(ds.set_label("x"), SchemaError);
    CHECK_THROWS_AS(ds.set_label("nope"), SchemaError);
    ds.set_label("y");
    CHECK(ds.label_index() == 1);
}

TEST_CASE("dataset select, drop, project and with_column") {
    auto ds = test::table({{"a"}, {"b", ColumnKind::numeric}, {"y"}},
                          {{"p", "1", "+"}, {"q", "2", "-"}, {"p", "", "+"}}, "y");
    const std::size_t pick[] = {2, 0, 2};
    auto s = ds.select_rows(pick);
    CHECK(s.rows() == 3);
    CHECK(test::text(s, 0, "b").empty());
    CHECK(test::text(s, 1, "b") == "1");
    auto d = ds.drop_columns({"a"});
    CHECK(d.arity() == 2);
    CHECK(d.label() == std::optional<std::string>("y"));
    auto p = ds.project({"y", "a"});
    CHECK(p.column(0).name() == "y");
    auto dropped_label = ds.drop_columns({"y"});
    CHECK_FALSE(dropped_label.label().has_value());
    Column extra("z", ColumnKind::nominal);
    const auto z = extra.intern("k");
    std::vector<Cell> vals(3, Cell::nominal(z));
    auto w = ds.with_column(extra, vals);
    CHECK(w.arity() == 4);
    CHECK(test::text(w, 2, "z") == "k");
}

TEST_CASE("conform remaps categories by name") {
    auto a = test::table({{"c"}}, {{"x"}, {"y"}});
    auto b = test::table({{"c"}}, {{"y"}, {"z"}});
    auto c = conform(b, a.columns());
    CHECK(c.column(0).categories() == std::vector<std::string>{"x", "y", "z"});
    CHECK(c.at(0, 0).category() == 1);
    CHECK(c.at(1, 0).category() == 2);
    auto numeric = test::table({{"c", ColumnKind::numeric}}, {{"1"}});
    CHECK_THROWS_AS(conform(numeric, a.columns()), SchemaError);
}

TEST_CASE("number formatting round-trips") {
    for (double v : {0.0, 1.0, -2.5, 0.1, 1e-300, 123456789.125, 84.72}) {
        const auto s = format_number(v);
        REQUIRE(parse_number(s).has_value());
        CHECK(*parse_number(s) == v);
    }
    CHECK(parse_number("  42 ") == 42.0);
    CHECK_FALSE(parse_number("4x").has_value());
    CHECK_FALSE(parse_number("").has_value());
    CHECK(trim("  a b ") == "a b");
}

TEST_CASE("csv quoting round-trips") {
    const std::vector<std::string> fields{"plain", "with,comma", "with \"quote\"", "", "line\nbreak"};
    const auto line = csv_join(fields);
    const auto parsed = csv_parse(line + "\n");
    REQUIRE(parsed.size() == 1);
    CHECK(parsed[0] == fields);
    CHECK(csv_parse("a,b\r\nc,d\n") == std::vector<std::vector<std::string>>{{"a", "b"}, {"c", "d"}});
}

TEST_CASE("datasets persist through CSV and schema sidecar") {
    test::TempDir dir("io");
    auto ds = test::table({{"a", ColumnKind::nominal, "site"}, {"b", ColumnKind::numeric}, {"y"}},
                          {{"p,q", "1.5", "+"}, {"", "-2", "-"}, {"r", "", "+"}}, "y");
    write_dataset(ds, dir / "d.csv");
    CHECK(std::filesystem::exists(schema_path(dir / "d.csv")));
    const auto back = read_dataset(dir / "d.csv");
    CHECK(back == ds);
    CHECK(back.column(0).group() == "site");
    CHECK(back.label() == ds.label());
    CHECK_THROWS_AS(read_dataset(dir / "missing.csv"), IoError);
}

TEST_CASE("atomic writes leave no temporary files") {
    test::TempDir dir("atomic");
    write_file_atomic(dir / "f.txt", "one");
    write_file_atomic(dir / "f.txt", "two");
    CHECK(read_file(dir / "f.txt") == "two");
    std::size_t files = 0;
    for (const auto& e : std::filesystem::directory_iterator(dir.path())) files += e.is_regular_file();
    CHECK(files == 1);
}

TEST_CASE("config sections, lists and errors") {
    const auto cfg = Config::parse("a = 1\n# note\nlist = x, y ,z\n\n[label stage]\nclasses = I, II\n");
    CHECK(cfg.root.integer("a", 0) == 1);
    CHECK(cfg.root.list("list") == std::vector<std::string>{"x", "y", "z"});
    REQUIRE(cfg.sections.size() == 1);
    CHECK(cfg.sections[0].kind() == "label");
    CHECK(cfg.sections[0].name() == "stage");
    CHECK_THROWS_AS(Config::parse("novalue\n"), ConfigError);
    CHECK_THROWS_AS(cfg.root.reject_unknown({"a"}), ConfigError);
    CHECK_THROWS_AS(Config::parse("a = x\n").root.number("a", 0), ConfigError);
    CHECK(parse_bool("true") == true);
    CHECK(parse_bool("off") == false);
    CHECK_FALSE(parse_bool("maybe").has_value());
}
