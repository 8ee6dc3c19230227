#include "support.hpp"

#include "strata/error.hpp"
#include "strata/rng.hpp"
#include "strata/sampler.hpp"

#include <doctest.h>

#include <map>
#include <set>

using namespace strata;

namespace {

std::map<std::string, std::size_t> label_counts(const Dataset& ds) {
    std::map<std::string, std::size_t> out;
    const auto lc = ds.label_index();
    for (std::size_t r = 0; r < ds.rows(); ++r) ++out[ds.format_cell(lc, ds.at(r, lc))];
    return out;
}

std::vector<ClassCount> counts(std::initializer_list<std::size_t> sizes) {
    std::vector<ClassCount> out;
    CategoryId id = 0;
    for (auto s : sizes) out.push_back({id++, s});
    return out;
}

std::map<CategoryId, std::size_t> quotas(const Allocation& a) {
    std::map<CategoryId, std::size_t> out;
    for (const auto& q : a.quotas) out[q.label] = q.quota;
    return out;
}

} // namespace

TEST_CASE("build_strata groups rows by label") {
    auto ds = test::table({{"y"}}, {{"A"}, {"A"}, {"B"}, {"B"}, {"B"}, {"C"}}, "y");
    const auto idx = build_strata(ds, "y");
    CHECK(idx.m() == 3);
    CHECK(idx.strata[0].rows.size() == 2);
    CHECK(idx.strata[1].rows.size() == 3);
    CHECK(idx.strata[2].rows.size() == 1);
    CHECK(idx.total == 6);

    CHECK(build_strata(test::class_sizes({5}), "y").m() == 1);

    auto gaps = test::table({{"y"}}, {{"A"}, {""}, {"B"}, {"A"}, {""}, {"B"}, {"A"}, {"A"}, {"B"}, {"A"}}, "y");
    const auto g = build_strata(gaps, "y");
    CHECK(g.total == 8);
    CHECK(g.excluded == 2);
    CHECK_THROWS_AS(build_strata(gaps, "nope"), SchemaError);
}

TEST_CASE("random_sample basics") {
    auto ds = test::class_sizes({6, 4});
    CHECK(random_sample(ds, 10, 1) == ds);
    auto two = test::class_sizes({1, 1});
    CHECK(random_sample(two, 1, 5) == random_sample(two, 1, 5));
    CHECK(random_sample(two, 1, 5).rows() == 1);
    try {
        random_sample(ds, 11, 0);
        FAIL("expected InsufficientDataError");
    } catch (const InsufficientDataError& e) {
        CHECK(e.requested() == 11);
        CHECK(e.available() == 10);
        CHECK(std::string(e.what()).find("11") != std::string::npos);
    }
}

TEST_CASE("random_sample gives every row an equal inclusion chance") {
    auto ds = test::class_sizes({10});
    std::vector<int> hits(10, 0);
    for (std::uint64_t t = 0; t < 10000; ++t) {
        const auto s = random_sample(ds, 5, t);
        REQUIRE(s.rows() == 5);
        for (std::size_t r = 0; r < 5; ++r) ++hits[static_cast<std::size_t>(s.at(r, 0).number())];
    }
    // Inclusion probability 1/2: mean 5000, sd 50.
    for (int h : hits) CHECK(std::abs(h - 5000) <= 300);
}

TEST_CASE("stratified allocation examples") {
    CHECK(label_counts(stratified_sample(test::class_sizes({60, 40}), "y", 10, 3)) ==
          std::map<std::string, std::size_t>{{"A", 6}, {"B", 4}});
    CHECK(label_counts(stratified_sample(test::class_sizes({50, 50}), "y", 3, 3)) ==
          std::map<std::string, std::size_t>{{"A", 2}, {"B", 1}});
    auto ds = test::class_sizes({7, 2, 1});
    CHECK(stratified_sample(ds, "y", 10, 9) == ds);
    CHECK_THROWS_AS(stratified_sample(ds, "y", 11, 9), InsufficientDataError);

    const auto seats = allocate_proportional(counts({1, 1, 1}), 2);
    CHECK(seats[0].count == 1);
    CHECK(seats[1].count == 1);
    CHECK(seats[2].count == 0);
}

TEST_CASE("eligible classes honour the minority boundary") {
    const auto at_boundary = build_strata(test::class_sizes({450, 45, 5}), "y");
    CHECK(eligible_classes(at_boundary, 0.01).size() == 3);
    const auto below = build_strata(test::class_sizes({450, 46, 4}), "y");
    CHECK(eligible_classes(below, 0.01) == std::vector<CategoryId>{0, 1});
    CHECK(eligible_classes(below, 0.0).size() == 3);
    CHECK_THROWS_AS(eligible_classes(below, 0.95), NoEligibleStrataError);

    // Lowering the ratio never removes a class.
    std::size_t prev = 0;
    for (double ratio : {0.9, 0.5, 0.1, 0.05, 0.01, 0.0}) {
        std::size_t now = 0;
        try {
            now = eligible_classes(below, ratio).size();
        } catch (const NoEligibleStrataError&) {
        }
        CHECK(now >= prev);
        prev = now;
    }
}

TEST_CASE("balanced allocation examples") {
    auto a = allocate_balanced(counts({1000, 800, 50}), 600, false);
    CHECK(quotas(a) == std::map<CategoryId, std::size_t>{{0, 300}, {1, 300}});
    CHECK(a.shortfall == 0);

    CHECK(quotas(allocate_balanced(counts({500, 500}), 600, false)) == std::map<CategoryId, std::size_t>{{0, 300}, {1, 300}});

    auto w = allocate_balanced(counts({500, 40}), 600, true);
    CHECK(quotas(w) == std::map<CategoryId, std::size_t>{{0, 300}, {1, 300}});
    CHECK_FALSE(w.quotas[0].with_replacement);
    CHECK(w.quotas[1].with_replacement);

    // Odd n: the remainder seat goes to the first class in size order.
    auto odd = allocate_balanced(counts({10, 20}), 7, false);
    CHECK(quotas(odd) == std::map<CategoryId, std::size_t>{{0, 3}, {1, 4}});

    // Remainder seat without capacity becomes a shortfall.
    auto tight = allocate_balanced(counts({3, 3}), 7, false);
    CHECK(tight.total() == 6);
    CHECK(tight.shortfall == 1);
}

TEST_CASE("balanced allocation capacity error reports the max achievable size") {
    try {
        allocate_balanced(counts({100, 80, 10}), 500, false);
        FAIL("expected CapacityError");
    } catch (const CapacityError& e) {
        // max over p of p * (p-th largest): 1*100, 2*80, 3*10.
        CHECK(e.max_achievable() == 160);
        CHECK(std::string(e.what()).find("160") != std::string::npos);
    }
}

TEST_CASE("balanced sampling on a balanced binary source") {
    SamplingPlan plan;
    plan.n = 1000;
    plan.seed = 4;
    const auto s = balanced_stratified_sample(test::class_sizes({25000, 25000}), "y", plan);
    CHECK(label_counts(s) == std::map<std::string, std::size_t>{{"A", 500}, {"B", 500}});
}

TEST_CASE("balanced sampling on the 70/20/9/1 profile") {
    const auto ds = test::class_sizes({35000, 10000, 4500, 500});
    SamplingPlan plan;
    plan.n = 500;
    plan.seed = 42;
    CHECK(label_counts(balanced_stratified_sample(ds, "y", plan)) ==
          std::map<std::string, std::size_t>{{"A", 125}, {"B", 125}, {"C", 125}, {"D", 125}});

    // Oracle: largest p whose p largest strata all hold floor(n/p) rows.
    const std::vector<std::size_t> sizes{35000, 10000, 4500, 500};
    auto oracle_p = [&](std::size_t n) {
        for (std::size_t p = sizes.size(); p >= 1; --p) {
            bool ok = true;
            for (std::size_t k = 0; k < p; ++k) ok = ok && sizes[k] >= n / p;
            if (ok) return p;
        }
        return std::size_t{0};
    };
    CHECK(oracle_p(30000) == 1);
    plan.n = 30000;
    const auto alloc = plan_balanced(ds, "y", plan);
    REQUIRE(alloc.quotas.size() == oracle_p(30000));
    CHECK(alloc.quotas[0].label == 0);
    CHECK(alloc.quotas[0].quota == 30000);

    for (std::size_t n : {1000u, 2000u, 5000u, 10000u, 15000u, 20000u, 25000u}) {
        plan.n = n;
        const auto a = plan_balanced(ds, "y", plan);
        CHECK(a.quotas.size() == oracle_p(n));
        CHECK(a.total() + a.shortfall == n);
    }
}

TEST_CASE("sampled rows are distinct input rows and deterministic across jobs") {
    const auto ds = test::class_sizes({700, 200, 90, 10});
    for (Strategy s : {Strategy::random, Strategy::stratified, Strategy::balanced}) {
        SamplingPlan plan;
        plan.strategy = s;
        plan.n = 200;
        plan.seed = 77;
        const auto one = draw_sample(ds, "y", plan, 1);
        const auto four = draw_sample(ds, "y", plan, 4);
        CHECK(one == four);
        CHECK(one == draw_sample(ds, "y", plan, 1));
        std::set<double> ids;
        for (std::size_t r = 0; r < one.rows(); ++r) ids.insert(one.at(r, 0).number());
        CHECK(ids.size() == one.rows());
        CHECK(*ids.rbegin() < 1000);
        plan.seed = 78;
        CHECK_FALSE(draw_sample(ds, "y", plan, 1) == one);
    }
}

TEST_CASE("with replacement every eligible class takes part") {
    SamplingPlan plan;
    plan.n = 400;
    plan.seed = 1;
    plan.with_replacement = true;
    const auto s = balanced_stratified_sample(test::class_sizes({1000, 50}), "y", plan);
    CHECK(label_counts(s) == std::map<std::string, std::size_t>{{"A", 200}, {"B", 200}});
}

TEST_CASE("sampling plan text form") {
    SamplingPlan plan;
    plan.strategy = Strategy::balanced;
    plan.n = 5000;
    plan.seed = 42;
    CHECK(plan.to_string() == "strategy=balanced n=5000 seed=42 minority_ratio=0.01 with_replacement=false");
    const auto back = SamplingPlan::parse(plan.to_string());
    CHECK(back.to_string() == plan.to_string());
    CHECK(SamplingPlan::parse("strategy=random n=3").strategy == Strategy::random);
    CHECK_THROWS_AS(SamplingPlan::parse("strategy=balanced n=0"), ConfigError);
    CHECK_THROWS_AS(SamplingPlan::parse("strategy=balanced n=5 minority_ratio=1"), ConfigError);
    CHECK_THROWS_AS(SamplingPlan::parse("strategy=clustered n=5"), ConfigError);
}
