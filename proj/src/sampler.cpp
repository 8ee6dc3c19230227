#include "strata/sampler.hpp"

#include "strata/config.hpp"
#include "strata/error.hpp"
#include "strata/parallel.hpp"
#include "strata/rng.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

namespace strata {

std::string_view to_string(Strategy s) {
    switch (s) {
    case Strategy::random: return "random";
    case Strategy::stratified: return "stratified";
    case Strategy::balanced: return "balanced";
    }
    return "random";
}

Strategy parse_strategy(std::string_view text) {
    if (text == "random") return Strategy::random;
    if (text == "stratified") return Strategy::stratified;
    if (text == "balanced") return Strategy::balanced;
    throw ConfigError("unknown sampling strategy '" + std::string(text) + "'");
}

std::string SamplingPlan::to_string() const {
    return "strategy=" + std::string(strata::to_string(strategy)) + " n=" + std::to_string(n) +
           " seed=" + std::to_string(seed) + " minority_ratio=" + format_number(minority_ratio) +
           " with_replacement=" + (with_replacement ? "true" : "false");
}

SamplingPlan SamplingPlan::parse(std::string_view text) {
    SamplingPlan plan;
    std::size_t pos = 0;
    while (pos < text.size()) {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n')) ++pos;
        if (pos >= text.size()) break;
        auto end = text.find_first_of(" \t\n", pos);
        if (end == std::string_view::npos) end = text.size();
        const std::string_view token = text.substr(pos, end - pos);
        pos = end;
        const auto eq = token.find('=');
        if (eq == std::string_view::npos) throw ConfigError("sampling plan: token '" + std::string(token) + "' lacks '='");
        const auto key = token.substr(0, eq);
        const auto value = token.substr(eq + 1);
        auto as_u64 = [&] {
            std::uint64_t v = 0;
            auto res = std::from_chars(value.data(), value.data() + value.size(), v);
            if (res.ec != std::errc{} || res.ptr != value.data() + value.size())
                throw ConfigError("sampling plan: '" + std::string(key) + "' needs a nonnegative integer");
            return v;
        };
        if (key == "strategy") {
            plan.strategy = parse_strategy(value);
        } else if (key == "n") {
            plan.n = as_u64();
        } else if (key == "seed") {
            plan.seed = as_u64();
        } else if (key == "minority_ratio") {
            auto r = parse_number(value);
            if (!r) throw ConfigError("sampling plan: minority_ratio needs a number");
            plan.minority_ratio = *r;
        } else if (key == "with_replacement") {
            auto b = parse_bool(value);
            if (!b) throw ConfigError("sampling plan: with_replacement needs true or false");
            plan.with_replacement = *b;
        } else {
            throw ConfigError("sampling plan: unknown key '" + std::string(key) + "'");
        }
    }
    plan.validate();
    return plan;
}

void SamplingPlan::validate() const {
    if (n < 1) throw ConfigError("sampling plan: n must be >= 1");
    if (!(minority_ratio >= 0.0 && minority_ratio < 1.0))
        throw ConfigError("sampling plan: minority_ratio must lie in [0, 1)");
}

const StrataIndex::Stratum* StrataIndex::find(CategoryId label) const {
    for (const auto& s : strata)
        if (s.label == label) return &s;
    return nullptr;
}

StrataIndex build_strata(const Dataset& ds, std::string_view label) {
    const std::size_t lc = ds.column_index(label);
    if (ds.column(lc).kind() != ColumnKind::nominal)
        throw SchemaError("label column '" + std::string(label) + "' must be nominal");
    std::vector<std::vector<std::size_t>> by_class(ds.column(lc).category_count());
    StrataIndex index;
    for (std::size_t r = 0; r < ds.rows(); ++r) {
        const Cell& y = ds.at(r, lc);
        if (y.missing()) {
            ++index.excluded;
            continue;
        }
        by_class[static_cast<std::size_t>(y.category())].push_back(r);
        ++index.total;
    }
    for (std::size_t c = 0; c < by_class.size(); ++c)
        if (!by_class[c].empty()) index.strata.push_back({static_cast<CategoryId>(c), std::move(by_class[c])});
    return index;
}

Dataset random_sample(const Dataset& ds, std::size_t n, std::uint64_t seed) {
    if (n < 1 || n > ds.rows()) throw InsufficientDataError(n, ds.rows());
    Rng rng(mix_seed(seed, hash_string("random")));
    return ds.select_rows(sample_indices(ds.rows(), n, rng));
}

__extension__ using u128 = unsigned __int128;

std::vector<ClassCount> allocate_proportional(const std::vector<ClassCount>& sizes, std::size_t n) {
    std::size_t total = 0;
    for (const auto& s : sizes) total += s.count;
    if (n > total) throw InsufficientDataError(n, total);
    std::vector<ClassCount> seats;
    std::vector<std::size_t> remainder;
    std::size_t assigned = 0;
    for (const auto& s : sizes) {
        // Exact integer arithmetic: seats = floor(n*count/total).
        const u128 scaled = static_cast<u128>(n) * s.count;
        seats.push_back({s.label, static_cast<std::size_t>(scaled / total)});
        remainder.push_back(static_cast<std::size_t>(scaled % total));
        assigned += seats.back().count;
    }
    std::vector<std::size_t> order(sizes.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    for (std::size_t k = 0; assigned < n; ++k, ++assigned) ++seats[order[k]].count;
    return seats;
}

namespace {

std::vector<ClassCount> strata_sizes(const StrataIndex& index) {
    std::vector<ClassCount> sizes;
    for (const auto& s : index.strata) sizes.push_back({s.label, s.rows.size()});
    return sizes;
}

struct Draw {
    const std::vector<std::size_t>* rows;
    std::size_t quota;
    bool with_replacement;
    std::uint64_t seed;
};

std::vector<std::size_t> draw_strata(const std::vector<Draw>& draws, unsigned jobs) {
    std::vector<std::vector<std::size_t>> picked(draws.size());
    parallel_for(draws.size(), jobs, [&](std::size_t i) {
        const Draw& d = draws[i];
        Rng rng(d.seed);
        auto& out = picked[i];
        if (d.with_replacement) {
            out.reserve(d.quota);
            for (std::size_t k = 0; k < d.quota; ++k) out.push_back((*d.rows)[rng.below(d.rows->size())]);
        } else {
            for (std::size_t k : sample_indices(d.rows->size(), d.quota, rng)) out.push_back((*d.rows)[k]);
        }
    });
    std::vector<std::size_t> all;
    for (auto& p : picked) all.insert(all.end(), p.begin(), p.end());
    std::sort(all.begin(), all.end());
    return all;
}

std::uint64_t stratum_seed(std::uint64_t seed, CategoryId label) {
    return mix_seed(seed, 0x5742a7aULL + static_cast<std::uint64_t>(label));
}

} // namespace

Dataset stratified_sample(const Dataset& ds, std::string_view label, std::size_t n, std::uint64_t seed, unsigned jobs) {
    const StrataIndex index = build_strata(ds, label);
    if (n < 1 || n > index.total) throw InsufficientDataError(n, index.total);
    const auto seats = allocate_proportional(strata_sizes(index), n);
    std::vector<Draw> draws;
    for (std::size_t i = 0; i < seats.size(); ++i)
        draws.push_back({&index.strata[i].rows, seats[i].count, false, stratum_seed(seed, seats[i].label)});
    return ds.select_rows(draw_strata(draws, jobs));
}

std::vector<CategoryId> eligible_classes(const StrataIndex& index, double minority_ratio) {
    if (index.strata.empty()) throw NoEligibleStrataError("no labelled rows to stratify");
    std::vector<CategoryId> out;
    for (const auto& s : index.strata) {
        const double share = static_cast<double>(s.rows.size()) / static_cast<double>(index.total);
        if (share >= minority_ratio) out.push_back(s.label);
    }
    if (out.empty()) throw NoEligibleStrataError("every class falls below the minority ratio " + format_number(minority_ratio));
    return out;
}

std::size_t Allocation::total() const noexcept {
    std::size_t t = 0;
    for (const auto& q : quotas) t += q.quota;
    return t;
}

Allocation allocate_balanced(const std::vector<ClassCount>& sizes, std::size_t n, bool with_replacement) {
    if (sizes.empty()) throw NoEligibleStrataError("allocate_balanced: no eligible strata");
    if (n < 1) throw InsufficientDataError(n, 0);
    std::vector<ClassCount> order = sizes;
    std::stable_sort(order.begin(), order.end(), [](const ClassCount& a, const ClassCount& b) {
        return a.count != b.count ? a.count > b.count : a.label < b.label;
    });

    Allocation alloc;
    alloc.requested = n;
    std::size_t p = order.size();
    if (!with_replacement) {
        // order is descending, so the p-th stratum bounds the first p.
        while (p >= 1 && order[p - 1].count < n / p) --p;
        if (p == 0) {
            std::size_t best = 0;
            for (std::size_t k = 1; k <= order.size(); ++k) best = std::max(best, k * order[k - 1].count);
            throw CapacityError(n, best);
        }
    }
    const std::size_t base = n / p;
    const std::size_t extra = n % p;
    for (std::size_t k = 0; k < p; ++k) {
        std::size_t quota = base;
        if (k < extra) {
            if (with_replacement || order[k].count > base) ++quota;
            else ++alloc.shortfall;
        }
        alloc.quotas.push_back({order[k].label, quota, with_replacement && order[k].count < quota});
    }
    return alloc;
}

Allocation plan_balanced(const Dataset& ds, std::string_view label, const SamplingPlan& plan) {
    plan.validate();
    const StrataIndex index = build_strata(ds, label);
    const auto eligible = eligible_classes(index, plan.minority_ratio);
    std::vector<ClassCount> sizes;
    for (CategoryId c : eligible) sizes.push_back({c, index.find(c)->rows.size()});
    return allocate_balanced(sizes, plan.n, plan.with_replacement);
}

Dataset balanced_stratified_sample(const Dataset& ds, std::string_view label, const SamplingPlan& plan, unsigned jobs) {
    const StrataIndex index = build_strata(ds, label);
    const auto eligible = eligible_classes(index, plan.minority_ratio);
    std::vector<ClassCount> sizes;
    for (CategoryId c : eligible) sizes.push_back({c, index.find(c)->rows.size()});
    const Allocation alloc = allocate_balanced(sizes, plan.n, plan.with_replacement);
    std::vector<Draw> draws;
    for (const auto& q : alloc.quotas)
        draws.push_back({&index.find(q.label)->rows, q.quota, q.with_replacement, stratum_seed(plan.seed, q.label)});
    return ds.select_rows(draw_strata(draws, jobs));
}

Dataset draw_sample(const Dataset& ds, std::string_view label, const SamplingPlan& plan, unsigned jobs) {
    plan.validate();
    switch (plan.strategy) {
    case Strategy::random: return random_sample(ds, plan.n, plan.seed);
    case Strategy::stratified: return stratified_sample(ds, label, plan.n, plan.seed, jobs);
    case Strategy::balanced: return balanced_stratified_sample(ds, label, plan, jobs);
    }
    throw ConfigError("unknown strategy");
}

} // namespace strata
