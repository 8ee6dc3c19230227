#include "strata/evaluator.hpp"

#include "strata/config.hpp"
#include "strata/error.hpp"
#include "strata/io.hpp"
#include "strata/parallel.hpp"
#include "strata/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <tuple>

namespace strata {

std::pair<Dataset, Dataset> split_train_test(const Dataset& ds, double ratio, std::uint64_t seed, bool stratify) {
    if (!(ratio > 0.0 && ratio < 1.0)) throw SplitError("split ratio must lie in (0, 1)");
    const std::size_t n = ds.rows();
    const auto train_n = static_cast<std::size_t>(std::lround(ratio * static_cast<double>(n)));
    if (train_n == 0 || train_n >= n)
        throw SplitError("split of " + std::to_string(n) + " rows at ratio " + format_number(ratio) +
                         " leaves one side empty");

    std::vector<std::size_t> train_rows;
    if (!stratify) {
        Rng rng(mix_seed(seed, hash_string("split")));
        train_rows = sample_indices(n, train_n, rng);
    } else {
        // Missing labels form one more stratum after the real classes.
        const std::size_t lc = ds.label_index();
        const std::size_t classes = ds.column(lc).category_count();
        std::vector<std::vector<std::size_t>> groups(classes + 1);
        for (std::size_t r = 0; r < n; ++r) {
            const Cell& y = ds.at(r, lc);
            groups[y.missing() ? classes : static_cast<std::size_t>(y.category())].push_back(r);
        }
        std::vector<ClassCount> sizes;
        std::vector<std::size_t> which;
        for (std::size_t g = 0; g < groups.size(); ++g)
            if (!groups[g].empty()) {
                sizes.push_back({static_cast<CategoryId>(g), groups[g].size()});
                which.push_back(g);
            }
        const auto seats = allocate_proportional(sizes, train_n);
        for (std::size_t i = 0; i < seats.size(); ++i) {
            const auto& rows = groups[which[i]];
            Rng rng(mix_seed(seed, 0x511u + which[i]));
            for (std::size_t k : sample_indices(rows.size(), seats[i].count, rng)) train_rows.push_back(rows[k]);
        }
        std::sort(train_rows.begin(), train_rows.end());
    }
    std::vector<std::size_t> test_rows;
    test_rows.reserve(n - train_n);
    std::size_t j = 0;
    for (std::size_t r = 0; r < n; ++r) {
        if (j < train_rows.size() && train_rows[j] == r) ++j;
        else test_rows.push_back(r);
    }
    return {ds.select_rows(train_rows), ds.select_rows(test_rows)};
}

double accuracy(std::span<const CategoryId> predictions, std::span<const CategoryId> truth) {
    if (predictions.size() != truth.size())
        throw EvaluationError("accuracy: " + std::to_string(predictions.size()) + " predictions for " +
                              std::to_string(truth.size()) + " labels");
    if (truth.empty()) throw EvaluationError("accuracy: no predictions");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) hits += predictions[i] == truth[i];
    return static_cast<double>(hits) / static_cast<double>(truth.size());
}

std::string_view to_string(CellStatus status) {
    switch (status) {
    case CellStatus::ok: return "ok";
    case CellStatus::skipped: return "skipped";
    case CellStatus::failed: return "failed";
    }
    return "failed";
}

namespace {

CellStatus parse_status(std::string_view s) {
    if (s == "ok") return CellStatus::ok;
    if (s == "skipped") return CellStatus::skipped;
    if (s == "failed") return CellStatus::failed;
    throw FormatError("unknown cell status '" + std::string(s) + "'");
}

std::string coordinates(std::string_view dataset, std::string_view label, Strategy strategy, ClassifierKind classifier,
                        std::size_t size) {
    return "cell (" + std::string(dataset) + ", " + std::string(label) + ", " + std::string(to_string(strategy)) +
           ", " + std::string(to_string(classifier)) + ", " + std::to_string(size) + ")";
}

void summarize(EvalCell& cell) {
    const auto& a = cell.accuracies;
    if (a.empty()) return;
    cell.best = *std::max_element(a.begin(), a.end());
    double sum = 0;
    for (double x : a) sum += x;
    cell.mean = sum / static_cast<double>(a.size());
    double sq = 0;
    for (double x : a) sq += (x - cell.mean) * (x - cell.mean);
    cell.stddev = a.size() > 1 ? std::sqrt(sq / static_cast<double>(a.size() - 1)) : 0.0;
}

Dataset prepare_for_label(const Dataset& ds, std::string_view label, const std::vector<std::string>& exclude) {
    std::vector<std::string> drop;
    for (const auto& name : exclude)
        if (name != label && ds.find_column(name)) drop.push_back(name);
    Dataset out = drop.empty() ? ds : ds.drop_columns(drop);
    out.set_label(std::string(label));
    const std::size_t lc = out.label_index();
    std::vector<std::size_t> keep;
    for (std::size_t r = 0; r < out.rows(); ++r)
        if (!out.at(r, lc).missing()) keep.push_back(r);
    return keep.size() == out.rows() ? out : out.select_rows(keep);
}

EvalCell run_prepared(const Dataset& ds, std::string_view dataset_id, std::string_view label, Strategy strategy,
                      ClassifierKind classifier, std::size_t size, std::uint64_t seed, const EvalOptions& options) {
    if (options.iterations == 0) throw EvaluationError("iterations must be >= 1");
    EvalCell cell;
    cell.dataset = dataset_id;
    cell.label = label;
    cell.strategy = strategy;
    cell.classifier = classifier;
    cell.sample_size = size;
    cell.seed = seed;
    const std::size_t lc = ds.label_index();
    for (std::size_t i = 0; i < options.iterations; ++i) {
        const std::uint64_t sub = mix_seed(seed, i);
        SamplingPlan plan;
        plan.strategy = strategy;
        plan.n = size;
        plan.seed = mix_seed(sub, 1);
        plan.minority_ratio = options.minority_ratio;
        plan.with_replacement = options.with_replacement;
        Dataset sample;
        try {
            sample = draw_sample(ds, label, plan);
        } catch (const InsufficientDataError& e) {
            throw InfeasibleCellError(coordinates(dataset_id, label, strategy, classifier, size) + ": " + e.what());
        } catch (const CapacityError& e) {
            throw InfeasibleCellError(coordinates(dataset_id, label, strategy, classifier, size) + ": " + e.what());
        } catch (const NoEligibleStrataError& e) {
            throw InfeasibleCellError(coordinates(dataset_id, label, strategy, classifier, size) + ": " + e.what());
        }
        auto [train, test] = split_train_test(sample, options.split_ratio, mix_seed(sub, 2), strategy != Strategy::random);
        const Model model = train_model(classifier, train, options.classifier);
        std::vector<CategoryId> truth;
        truth.reserve(test.rows());
        for (std::size_t r = 0; r < test.rows(); ++r) truth.push_back(test.at(r, lc).category());
        cell.accuracies.push_back(accuracy(predict_all(model, test), truth));
    }
    summarize(cell);
    return cell;
}

} // namespace

EvalCell run_cell(const Dataset& ds, std::string_view label, Strategy strategy, ClassifierKind classifier,
                  std::size_t size, std::uint64_t seed, const EvalOptions& options) {
    const Dataset prepared = prepare_for_label(ds, label, options.exclude_columns);
    return run_prepared(prepared, "", label, strategy, classifier, size, seed, options);
}

// ---------------------------------------------------------------------------

void GridConfig::validate() const {
    if (sizes.empty()) throw ConfigError("grid: sizes must not be empty");
    for (std::size_t i = 1; i < sizes.size(); ++i)
        if (sizes[i] <= sizes[i - 1]) throw ConfigError("grid: sizes must be strictly increasing");
    if (!(split_ratio > 0.0 && split_ratio < 1.0)) throw ConfigError("grid: split_ratio must lie in (0, 1)");
    if (iterations == 0) throw ConfigError("grid: iterations must be >= 1");
    if (!(minority_ratio >= 0.0 && minority_ratio < 1.0)) throw ConfigError("grid: minority_ratio must lie in [0, 1)");
    if (labels.empty()) throw ConfigError("grid: labels must not be empty");
    if (strategies.empty() || classifiers.empty()) throw ConfigError("grid: strategies and classifiers must not be empty");
}

GridConfig GridConfig::parse(std::string_view text) {
    const Config cfg = Config::parse(text);
    if (!cfg.sections.empty())
        throw ConfigError("line " + std::to_string(cfg.sections.front().line()) + ": grid config takes no sections");
    const auto& root = cfg.root;
    root.reject_unknown({"datasets", "labels", "strategies", "classifiers", "sizes", "split_ratio", "iterations", "seed",
                         "minority_ratio", "with_replacement", "min_leaf", "max_depth", "alpha", "k"});
    GridConfig g;
    g.datasets = root.list("datasets");
    g.labels = root.list("labels");
    if (root.has("strategies")) {
        g.strategies.clear();
        for (const auto& s : root.list("strategies")) g.strategies.push_back(parse_strategy(s));
    }
    if (root.has("classifiers")) {
        g.classifiers.clear();
        for (const auto& c : root.list("classifiers")) g.classifiers.push_back(parse_classifier(c));
    }
    if (root.has("sizes")) {
        g.sizes.clear();
        for (const auto& s : root.list("sizes")) {
            std::size_t v = 0;
            auto res = std::from_chars(s.data(), s.data() + s.size(), v);
            if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || v == 0)
                throw ConfigError(root.where("sizes") + ": '" + s + "' is not a positive integer");
            g.sizes.push_back(v);
        }
    }
    g.split_ratio = root.number("split_ratio", g.split_ratio);
    g.iterations = root.integer("iterations", g.iterations);
    g.seed = root.integer("seed", g.seed);
    g.minority_ratio = root.number("minority_ratio", g.minority_ratio);
    g.with_replacement = root.flag("with_replacement", g.with_replacement);
    g.classifier.tree.min_leaf = root.integer("min_leaf", g.classifier.tree.min_leaf);
    if (root.has("max_depth")) g.classifier.tree.max_depth = root.integer("max_depth", 0);
    g.classifier.alpha = root.number("alpha", g.classifier.alpha);
    g.classifier.knn.k = root.integer("k", g.classifier.knn.k);
    g.validate();
    return g;
}

std::size_t GridConfig::cell_count() const {
    return datasets.size() * labels.size() * strategies.size() * classifiers.size() * sizes.size();
}

std::uint64_t cell_seed(std::uint64_t master, std::string_view dataset, std::string_view label, Strategy strategy,
                        ClassifierKind classifier, std::size_t size) {
    std::uint64_t s = mix_seed(master, hash_string(dataset));
    s = mix_seed(s, hash_string(label));
    s = mix_seed(s, hash_string(to_string(strategy)));
    s = mix_seed(s, hash_string(to_string(classifier)));
    return mix_seed(s, size);
}

ExperimentReport run_grid(const GridConfig& config, const std::map<std::string, Dataset>& datasets, unsigned jobs) {
    config.validate();
    EvalOptions options;
    options.split_ratio = config.split_ratio;
    options.iterations = config.iterations;
    options.minority_ratio = config.minority_ratio;
    options.with_replacement = config.with_replacement;
    options.classifier = config.classifier;
    options.exclude_columns = config.labels;

    struct Job {
        std::size_t prepared;
        EvalCell cell;
    };
    std::vector<Dataset> prepared;
    std::vector<std::string> prepare_error;
    std::vector<Job> jobs_list;
    for (const auto& d : config.datasets) {
        auto it = datasets.find(d);
        for (const auto& label : config.labels) {
            std::string error;
            Dataset ds;
            if (it == datasets.end()) {
                error = "dataset '" + d + "' not loaded";
            } else {
                try {
                    ds = prepare_for_label(it->second, label, options.exclude_columns);
                } catch (const Error& e) {
                    error = e.what();
                }
            }
            prepared.push_back(std::move(ds));
            prepare_error.push_back(std::move(error));
            for (Strategy s : config.strategies)
                for (ClassifierKind c : config.classifiers)
                    for (std::size_t size : config.sizes) {
                        Job job{prepared.size() - 1, {}};
                        job.cell.dataset = d;
                        job.cell.label = label;
                        job.cell.strategy = s;
                        job.cell.classifier = c;
                        job.cell.sample_size = size;
                        job.cell.seed = cell_seed(config.seed, d, label, s, c, size);
                        jobs_list.push_back(std::move(job));
                    }
        }
    }

    parallel_for(jobs_list.size(), jobs, [&](std::size_t i) {
        Job& job = jobs_list[i];
        EvalCell& cell = job.cell;
        if (!prepare_error[job.prepared].empty()) {
            cell.status = CellStatus::failed;
            cell.reason = prepare_error[job.prepared];
            return;
        }
        try {
            EvalCell done = run_prepared(prepared[job.prepared], cell.dataset, cell.label, cell.strategy, cell.classifier,
                                         cell.sample_size, cell.seed, options);
            cell = std::move(done);
        } catch (const InfeasibleCellError& e) {
            cell.status = CellStatus::skipped;
            cell.reason = e.what();
        } catch (const Error& e) {
            cell.status = CellStatus::failed;
            cell.reason = coordinates(cell.dataset, cell.label, cell.strategy, cell.classifier, cell.sample_size) + ": " +
                          e.what();
        }
    });

    ExperimentReport report;
    report.cells.reserve(jobs_list.size());
    for (auto& job : jobs_list) report.cells.push_back(std::move(job.cell));
    return report;
}

// ---------------------------------------------------------------------------

std::string ExperimentReport::results_csv() const {
    std::string out = "dataset,label,strategy,classifier,sample_size,iteration,accuracy\n";
    for (const auto& c : cells)
        for (std::size_t i = 0; i < c.accuracies.size(); ++i)
            out += csv_join({c.dataset, c.label, std::string(to_string(c.strategy)), std::string(to_string(c.classifier)),
                             std::to_string(c.sample_size), std::to_string(i), format_number(c.accuracies[i])}) +
                   '\n';
    return out;
}

std::string ExperimentReport::summary_csv() const {
    std::string out = "dataset,label,strategy,classifier,sample_size,status,best,mean,stddev,seed,reason\n";
    for (const auto& c : cells) {
        const bool ok = c.status == CellStatus::ok;
        out += csv_join({c.dataset, c.label, std::string(to_string(c.strategy)), std::string(to_string(c.classifier)),
                         std::to_string(c.sample_size), std::string(to_string(c.status)),
                         ok ? format_number(c.best) : "", ok ? format_number(c.mean) : "",
                         ok ? format_number(c.stddev) : "", std::to_string(c.seed), c.reason}) +
               '\n';
    }
    return out;
}

ExperimentReport ExperimentReport::from_csv(std::string_view results_csv, std::string_view summary_csv) {
    auto parse_size = [](const std::string& s) {
        std::uint64_t v = 0;
        auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size())
            throw FormatError("report csv: '" + s + "' is not an integer");
        return v;
    };
    auto parse_double = [](const std::string& s) {
        auto v = parse_number(s);
        if (!v) throw FormatError("report csv: '" + s + "' is not a number");
        return *v;
    };
    ExperimentReport report;
    const auto summary = csv_parse(summary_csv);
    if (summary.empty() || summary[0].size() != 11) throw FormatError("summary csv: bad header");
    for (std::size_t i = 1; i < summary.size(); ++i) {
        const auto& r = summary[i];
        if (r.size() != 11) throw FormatError("summary csv line " + std::to_string(i + 1) + ": expected 11 fields");
        EvalCell c;
        c.dataset = r[0];
        c.label = r[1];
        c.strategy = parse_strategy(r[2]);
        c.classifier = parse_classifier(r[3]);
        c.sample_size = parse_size(r[4]);
        c.status = parse_status(r[5]);
        if (c.status == CellStatus::ok) {
            c.best = parse_double(r[6]);
            c.mean = parse_double(r[7]);
            c.stddev = parse_double(r[8]);
        }
        c.seed = parse_size(r[9]);
        c.reason = r[10];
        report.cells.push_back(std::move(c));
    }
    const auto results = csv_parse(results_csv);
    if (results.empty() || results[0].size() != 7) throw FormatError("results csv: bad header");
    for (std::size_t i = 1; i < results.size(); ++i) {
        const auto& r = results[i];
        if (r.size() != 7) throw FormatError("results csv line " + std::to_string(i + 1) + ": expected 7 fields");
        const auto strategy = parse_strategy(r[2]);
        const auto classifier = parse_classifier(r[3]);
        const auto size = parse_size(r[4]);
        auto it = std::find_if(report.cells.begin(), report.cells.end(), [&](const EvalCell& c) {
            return c.dataset == r[0] && c.label == r[1] && c.strategy == strategy && c.classifier == classifier &&
                   c.sample_size == size;
        });
        if (it == report.cells.end())
            throw FormatError("results csv line " + std::to_string(i + 1) + ": no matching summary cell");
        it->accuracies.push_back(parse_double(r[6]));
    }
    return report;
}

} // namespace strata
