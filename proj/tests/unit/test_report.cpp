#include "support.hpp"

#include "strata/error.hpp"
#include "strata/report.hpp"

#include <doctest.h>

#include <regex>
#include <sstream>

using namespace strata;

namespace {

EvalCell cell(Strategy s, ClassifierKind k, std::size_t size, double best) {
    EvalCell c;
    c.dataset = "breast";
    c.label = "stage";
    c.strategy = s;
    c.classifier = k;
    c.sample_size = size;
    c.accuracies = {best};
    c.best = c.mean = best;
    return c;
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

} // namespace

TEST_CASE("percent formatting") {
    CHECK(format_percent(0.8472) == "84.72%");
    CHECK(format_percent(1.0) == "100.00%");
    CHECK(format_percent(0.0) == "0.00%");
    CHECK(parse_report_format("md") == ReportFormat::markdown);
    CHECK_THROWS_AS(parse_report_format("html"), Error);
}

TEST_CASE("single cell renders as a percentage") {
    ExperimentReport r;
    r.cells.push_back(cell(Strategy::balanced, ClassifierKind::decision_tree, 500, 0.8472));
    const auto md = emit_report(r, ReportFormat::markdown);
    CHECK(md.find("| 500 | 84.72% |") != std::string::npos);
    CHECK(emit_report(r, ReportFormat::csv) == r.results_csv());
}

TEST_CASE("nine sizes by three classifiers give a 9x4 table") {
    ExperimentReport r;
    const std::size_t sizes[] = {500, 1000, 2000, 5000, 10000, 15000, 20000, 25000, 30000};
    for (auto k : {ClassifierKind::decision_tree, ClassifierKind::naive_bayes, ClassifierKind::knn})
        for (std::size_t i = 0; i < 9; ++i) r.cells.push_back(cell(Strategy::balanced, k, sizes[i], 0.5 + 0.01 * i));
    const auto l = lines(emit_report(r, ReportFormat::markdown));
    REQUIRE(l.size() == 2 + 2 + 9);
    CHECK(l[0] == "### breast / stage");
    CHECK(l[2] == "| Sample Size | Balanced DT | Balanced NB | Balanced KNN |");
    const std::regex row(R"(\| \d+ \| \d{1,3}\.\d\d% \| \d{1,3}\.\d\d% \| \d{1,3}\.\d\d% \|)");
    for (std::size_t i = 4; i < l.size(); ++i) CHECK(std::regex_match(l[i], row));
    CHECK(l[4].rfind("| 500 |", 0) == 0);
    CHECK(l[12].rfind("| 30000 |", 0) == 0);
}

TEST_CASE("skipped cells show a dash and a note") {
    ExperimentReport r;
    r.cells.push_back(cell(Strategy::balanced, ClassifierKind::knn, 500, 0.7));
    auto skipped = cell(Strategy::balanced, ClassifierKind::knn, 30000, 0.0);
    skipped.status = CellStatus::skipped;
    skipped.accuracies.clear();
    skipped.reason = "maximum achievable sample size is 20000";
    r.cells.push_back(skipped);
    const auto md = emit_report(r, ReportFormat::markdown);
    CHECK(md.find("| 30000 | — |") != std::string::npos);
    CHECK(md.find("Notes:") != std::string::npos);
    CHECK(md.find("maximum achievable sample size is 20000") != std::string::npos);
}

TEST_CASE("markdown percentages round-trip the CSV values") {
    ExperimentReport r;
    for (std::size_t i = 0; i < 50; ++i)
        r.cells.push_back(cell(Strategy::random, ClassifierKind::naive_bayes, 100 * (i + 1), i / 49.0));
    const auto md = emit_report(r, ReportFormat::markdown);
    const std::regex pct(R"(\| (\d+) \| (\d+\.\d\d)% \|)");
    std::size_t seen = 0;
    for (std::sregex_iterator it(md.begin(), md.end(), pct), end; it != end; ++it, ++seen) {
        const double shown = std::stod((*it)[2]);
        const std::size_t i = std::stoul((*it)[1]) / 100 - 1;
        CHECK(std::abs(shown - 100.0 * r.cells[i].best) <= 0.005 + 1e-9);
    }
    CHECK(seen == 50);
}

TEST_CASE("empty reports are an error") {
    CHECK_THROWS_AS(emit_report(ExperimentReport{}, ReportFormat::markdown), ReportError);
    CHECK_THROWS_AS(emit_report(ExperimentReport{}, ReportFormat::csv), ReportError);
}
