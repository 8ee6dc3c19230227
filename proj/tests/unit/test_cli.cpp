#include "support.hpp"

#include "cli.hpp"
#include "strata/io.hpp"

#include <doctest.h>

#include <cstdlib>
#include <sstream>

using namespace strata;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

const char* small_spec = "rows = 2000\n"
                         "signal = 0.9\n"
                         "[label y]\n"
                         "classes = A, B, C\n"
                         "proportions = 0.6, 0.3, 0.1\n"
                         "[attribute g]\n"
                         "kind = nominal\n"
                         "categories = a, b, c\n"
                         "base = 0.4, 0.3, 0.3\n"
                         "class.A = 0.8, 0.1, 0.1\n"
                         "class.B = 0.1, 0.8, 0.1\n"
                         "class.C = 0.1, 0.1, 0.8\n"
                         "[attribute x]\n"
                         "kind = numeric\n"
                         "base = 0, 1\n"
                         "class.A = -1, 1\n"
                         "class.B = 0, 1\n"
                         "class.C = 1, 1\n";

} // namespace

TEST_CASE("synth output is byte-identical across runs and jobs") {
    test::TempDir dir("cli-synth");
    write_file_atomic(dir / "spec.cfg", small_spec);
    const auto spec = (dir / "spec.cfg").string();
    REQUIRE(cli({"synth", "--spec", spec, "--seed", "42", "--out", (dir / "a.csv").string()}).code == 0);
    REQUIRE(cli({"synth", "--spec", spec, "--seed", "42", "--jobs", "4", "--out", (dir / "b.csv").string()}).code == 0);
    CHECK(read_file(dir / "a.csv") == read_file(dir / "b.csv"));
    REQUIRE(cli({"synth", "--spec", spec, "--seed", "43", "--out", (dir / "c.csv").string()}).code == 0);
    CHECK(read_file(dir / "a.csv") != read_file(dir / "c.csv"));
}

TEST_CASE("grid writes results, summary and report") {
    test::TempDir dir("cli-grid");
    write_file_atomic(dir / "spec.cfg", small_spec);
    REQUIRE(cli({"synth", "--spec", (dir / "spec.cfg").string(), "--seed", "1", "--out", (dir / "d.csv").string()}).code == 0);
    write_file_atomic(dir / "grid.cfg", "datasets = d.csv\nlabels = y\nstrategies = random, balanced\n"
                                        "classifiers = dt, nb\nsizes = 200, 3000\niterations = 2\n");
    const auto r = cli({"grid", "--config", (dir / "grid.cfg").string(), "--out", (dir / "results").string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("cells=8") != std::string::npos);
    CHECK(r.out.find("skipped=4") != std::string::npos);
    for (const char* f : {"results.csv", "summary.csv", "report.md"}) CHECK(std::filesystem::exists(dir / "results" / f));
    const auto md = read_file(dir / "results" / "report.md");
    CHECK(md.find("### d / y") != std::string::npos);
    CHECK(md.find("—") != std::string::npos);

    const auto rep = cli({"report", "--in", (dir / "results").string()});
    CHECK(rep.code == 0);
    CHECK(rep.out == md);
}

TEST_CASE("balanced sampling beyond capacity exits 1 naming the maximum") {
    test::TempDir dir("cli-sample");
    write_file_atomic(dir / "spec.cfg", small_spec);
    REQUIRE(cli({"synth", "--spec", (dir / "spec.cfg").string(), "--seed", "1", "--out", (dir / "d.csv").string()}).code == 0);
    const auto r = cli({"sample", "--in", (dir / "d.csv").string(), "--label", "y", "--strategy", "balanced", "--n", "30000",
                        "--out", (dir / "s.csv").string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("max achievable n is") != std::string::npos);
    CHECK_FALSE(std::filesystem::exists(dir / "s.csv"));

    const auto ok = cli({"sample", "--in", (dir / "d.csv").string(), "--label", "y", "--strategy", "balanced", "--n", "300",
                         "--seed", "3", "--out", (dir / "s.csv").string()});
    CHECK(ok.code == 0);
}

TEST_CASE("usage errors exit 2") {
    CHECK(cli({"frobnicate"}).code == 2);
    const auto r = cli({"synth", "--spec", "default", "--out", "x.csv", "--bogus", "1"});
    CHECK(r.code == 2);
    CHECK(r.err.find("--bogus") != std::string::npos);
    CHECK(cli({"synth", "--help"}).code == 0);
    CHECK(cli({"parse", "--dict", "/nonexistent.dict", "--in", "/nonexistent.txt", "--out", "x.csv"}).code == 1);
}
