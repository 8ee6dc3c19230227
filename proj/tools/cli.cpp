#include "cli.hpp"

#include "strata/classifier.hpp"
#include "strata/error.hpp"
#include "strata/evaluator.hpp"
#include "strata/io.hpp"
#include "strata/preprocessor.hpp"
#include "strata/record_parser.hpp"
#include "strata/report.hpp"
#include "strata/sampler.hpp"
#include "strata/synthgen.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>

namespace strata {

namespace fs = std::filesystem;

namespace {

constexpr const char* seed_env = "STRATA_BENCH_SEED";

struct Common {
    std::optional<std::uint64_t> seed;
    unsigned jobs = 1;
};

/// --seed, then STRATA_BENCH_SEED, then the fallback.
std::uint64_t resolve_seed(const Common& c, std::uint64_t fallback = 0) {
    if (c.seed) return *c.seed;
    if (const char* env = std::getenv(seed_env); env && *env) {
        std::uint64_t v = 0;
        const std::string_view s(env);
        auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
            throw ConfigError(std::string(seed_env) + " is not an unsigned integer: '" + std::string(s) + "'");
        return v;
    }
    return fallback;
}

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--seed", c.seed, "Random seed (default: $STRATA_BENCH_SEED, else 0)");
    cmd->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
}

void write_or_print(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") out << text;
    else write_file_atomic(path, text);
}

std::string dataset_id(const std::string& path) { return fs::path(path).stem().string(); }

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Stratified sampling benchmark for imbalanced prognosis data", "strata-bench"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    Common common;
    std::function<void()> action;

    // parse
    std::string dict_path, in_path, out_path, errors_path;
    std::size_t batch_size = default_batch_size;
    auto* parse = app.add_subcommand("parse", "Parse fixed-width records with a data dictionary");
    parse->add_option("--dict", dict_path, "Data dictionary")->required();
    parse->add_option("--in", in_path, "Fixed-width record file")->required();
    parse->add_option("--out", out_path, "Output dataset CSV")->required();
    parse->add_option("--errors", errors_path, "Write rejected lines as CSV");
    parse->add_option("--batch-size", batch_size, "Lines per batch")->check(CLI::PositiveNumber);
    add_common(parse, common);
    parse->callback([&] {
        action = [&] {
            const auto dict = load_dictionary(read_file(dict_path));
            std::ifstream in(in_path, std::ios::binary);
            if (!in) throw IoError("cannot open '" + in_path + "'");
            const auto result = parse_records(in, dict, batch_size);
            write_dataset(result.dataset, out_path);
            if (!errors_path.empty()) {
                std::string csv = "line,field,message\n";
                for (const auto& e : result.errors)
                    csv += csv_join({std::to_string(e.line + 1), e.field, e.message}) + '\n';
                write_file_atomic(errors_path, csv);
            }
            out << "rows=" << result.dataset.rows() << " rejected=" << result.rejected
                << " long_lines=" << result.long_lines << '\n';
        };
    });

    // preprocess
    std::string config_path, label, report_path;
    auto* pre = app.add_subcommand("preprocess", "Derive labels and apply the missing, correlation and gain filters");
    pre->add_option("--in", in_path, "Input dataset CSV")->required();
    pre->add_option("--config", config_path, "Preprocessing config")->required();
    pre->add_option("--out", out_path, "Output dataset CSV")->required();
    pre->add_option("--label", label, "Label column (overrides the config)");
    pre->add_option("--report", report_path, "Write the filter report CSV");
    add_common(pre, common);
    pre->callback([&] {
        action = [&] {
            auto cfg = parse_preprocess_config(read_file(config_path), fs::path(config_path).parent_path().string());
            if (!label.empty()) cfg.label = label;
            auto [ds, report] = preprocess(read_dataset(in_path), cfg);
            write_dataset(ds, out_path);
            if (!report_path.empty()) write_file_atomic(report_path, report.to_csv());
            out << "rows=" << ds.rows() << " columns=" << ds.arity() << '\n';
        };
    });

    // sample
    std::string strategy_name = "balanced";
    std::size_t n = 0;
    double minority_ratio = 0.01;
    bool with_replacement = false;
    auto* sample = app.add_subcommand("sample", "Draw a random, stratified or balanced sample");
    sample->add_option("--in", in_path, "Input dataset CSV")->required();
    sample->add_option("--label", label, "Label column")->required();
    sample->add_option("--strategy", strategy_name, "random, stratified or balanced");
    sample->add_option("--n", n, "Sample size")->required()->check(CLI::PositiveNumber);
    sample->add_option("--out", out_path, "Output dataset CSV")->required();
    sample->add_option("--minority-ratio", minority_ratio, "Minority cutoff for balanced sampling");
    sample->add_flag("--with-replacement", with_replacement, "Let undersized strata draw with replacement");
    add_common(sample, common);
    sample->callback([&] {
        action = [&] {
            SamplingPlan plan;
            plan.strategy = parse_strategy(strategy_name);
            plan.n = n;
            plan.seed = resolve_seed(common);
            plan.minority_ratio = minority_ratio;
            plan.with_replacement = with_replacement;
            const Dataset ds = read_dataset(in_path);
            const Dataset s = draw_sample(ds, label, plan, common.jobs);
            write_dataset(s, out_path);
            out << plan.to_string() << " rows=" << s.rows() << '\n';
        };
    });

    // train
    std::string classifier_name = "decision_tree";
    ClassifierParams params;
    std::optional<std::size_t> max_depth;
    auto* train = app.add_subcommand("train", "Train a classifier and save the model");
    train->add_option("--in", in_path, "Training dataset CSV")->required();
    train->add_option("--label", label, "Label column")->required();
    train->add_option("--classifier", classifier_name, "decision_tree, naive_bayes or knn");
    train->add_option("--out", out_path, "Model file")->required();
    train->add_option("--k", params.knn.k, "Neighbours for knn")->check(CLI::PositiveNumber);
    train->add_option("--alpha", params.alpha, "Laplace smoothing for naive_bayes");
    train->add_option("--min-leaf", params.tree.min_leaf, "Minimum rows per tree branch")->check(CLI::PositiveNumber);
    train->add_option("--max-depth", max_depth, "Tree depth limit");
    add_common(train, common);
    train->callback([&] {
        action = [&] {
            params.tree.max_depth = max_depth;
            Dataset ds = read_dataset(in_path);
            ds.set_label(label);
            const auto kind = parse_classifier(classifier_name);
            const Model model = train_model(kind, ds, params);
            std::string training_ref;
            if (kind == ClassifierKind::knn) {
                const fs::path training = fs::path(out_path).string() + ".train.csv";
                write_dataset(std::get<KnnModel>(model).training(), training);
                training_ref = training.filename().string();
            }
            write_file_atomic(out_path, serialize_model(model, training_ref));
            out << "model=" << to_string(kind) << " rows=" << ds.rows() << '\n';
        };
    });

    // eval
    std::string model_path;
    std::size_t iterations = 10;
    double split_ratio = 0.6;
    auto* eval = app.add_subcommand("eval", "Score a saved model, or run one sample/split/train cell");
    eval->add_option("--in", in_path, "Dataset CSV")->required();
    eval->add_option("--model", model_path, "Saved model to score on --in");
    eval->add_option("--label", label, "Label column (cell mode)");
    eval->add_option("--strategy", strategy_name, "Sampling strategy (cell mode)");
    eval->add_option("--classifier", classifier_name, "Classifier (cell mode)");
    eval->add_option("--n", n, "Sample size (cell mode)");
    eval->add_option("--iterations", iterations, "Repetitions (cell mode)")->check(CLI::PositiveNumber);
    eval->add_option("--split-ratio", split_ratio, "Train share of each sample (cell mode)");
    eval->add_option("--minority-ratio", minority_ratio, "Minority cutoff for balanced sampling");
    eval->add_flag("--with-replacement", with_replacement, "Let undersized strata draw with replacement");
    eval->add_option("--out", out_path, "Write the result CSV here instead of stdout");
    add_common(eval, common);
    eval->callback([&] {
        action = [&] {
            if (!model_path.empty()) {
                const Model model = deserialize_model(read_file(model_path), fs::path(model_path).parent_path());
                const auto& schema = model_schema(model);
                Dataset test = conform(read_dataset(in_path), schema);
                const std::size_t lc = model_label_index(model);
                std::vector<CategoryId> truth;
                std::vector<std::size_t> keep;
                for (std::size_t r = 0; r < test.rows(); ++r)
                    if (!test.at(r, lc).missing()) keep.push_back(r);
                test = test.select_rows(keep);
                for (std::size_t r = 0; r < test.rows(); ++r) truth.push_back(test.at(r, lc).category());
                const double acc = accuracy(predict_all(model, test), truth);
                write_or_print(out_path, "rows,accuracy\n" + std::to_string(test.rows()) + "," + format_number(acc) + "\n",
                               out);
                return;
            }
            if (label.empty() || n == 0) throw ConfigError("eval needs --model, or --label and --n for a cell run");
            EvalOptions options;
            options.iterations = iterations;
            options.split_ratio = split_ratio;
            options.minority_ratio = minority_ratio;
            options.with_replacement = with_replacement;
            const auto strategy = parse_strategy(strategy_name);
            const auto kind = parse_classifier(classifier_name);
            ExperimentReport report;
            report.cells.push_back(
                run_cell(read_dataset(in_path), label, strategy, kind, n, resolve_seed(common), options));
            report.cells.back().dataset = dataset_id(in_path);
            write_or_print(out_path, report.summary_csv(), out);
        };
    });

    // grid
    auto* grid = app.add_subcommand("grid", "Run the strategy x classifier x size grid");
    grid->add_option("--config", config_path, "Grid config")->required();
    grid->add_option("--out", out_path, "Output directory")->required();
    add_common(grid, common);
    grid->callback([&] {
        action = [&] {
            GridConfig cfg = GridConfig::parse(read_file(config_path));
            if (common.seed) cfg.seed = *common.seed;
            if (cfg.datasets.empty()) throw ConfigError("grid config lists no datasets");
            const fs::path base = fs::path(config_path).parent_path();
            std::map<std::string, Dataset> data;
            std::vector<std::string> ids;
            for (const auto& d : cfg.datasets) {
                fs::path p = d;
                if (p.is_relative()) p = base / p;
                const std::string id = dataset_id(d);
                if (data.count(id)) throw ConfigError("grid config: two datasets share the id '" + id + "'");
                data.emplace(id, read_dataset(p));
                ids.push_back(id);
            }
            cfg.datasets = ids;
            const auto report = run_grid(cfg, data, common.jobs);
            const fs::path dir = out_path;
            fs::create_directories(dir);
            write_file_atomic(dir / "results.csv", report.results_csv());
            write_file_atomic(dir / "summary.csv", report.summary_csv());
            write_file_atomic(dir / "report.md", emit_report(report, ReportFormat::markdown));
            std::size_t ok = 0, skipped = 0, failed = 0;
            for (const auto& c : report.cells) {
                ok += c.status == CellStatus::ok;
                skipped += c.status == CellStatus::skipped;
                failed += c.status == CellStatus::failed;
            }
            out << "cells=" << report.cells.size() << " ok=" << ok << " skipped=" << skipped << " failed=" << failed
                << '\n';
        };
    });

    // synth
    std::string spec_path;
    std::optional<std::size_t> rows;
    std::optional<double> signal;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
    synth->add_option("--spec", spec_path, "Synthetic spec file, or 'default' for the built-in profile")->required();
    synth->add_option("--out", out_path, "Output dataset CSV")->required();
    synth->add_option("--rows", rows, "Override the row count")->check(CLI::PositiveNumber);
    synth->add_option("--signal", signal, "Override the signal strength")->check(CLI::Range(0.0, 1.0));
    add_common(synth, common);
    synth->callback([&] {
        action = [&] {
            SynthSpec spec = spec_path == "default" ? SynthSpec::default_profile() : SynthSpec::parse(read_file(spec_path));
            if (rows) spec.rows = *rows;
            if (signal) spec.signal = *signal;
            const Dataset ds = generate(spec, resolve_seed(common), common.jobs);
            write_dataset(ds, out_path);
            out << "rows=" << ds.rows() << " columns=" << ds.arity() << '\n';
        };
    });

    // mix
    std::string a_path, b_path, name_a, name_b;
    std::size_t na = 0, nb = 0;
    auto* mixcmd = app.add_subcommand("mix", "Combine random rows of two datasets on their shared columns");
    mixcmd->add_option("--a", a_path, "First dataset CSV")->required();
    mixcmd->add_option("--b", b_path, "Second dataset CSV")->required();
    mixcmd->add_option("--na", na, "Rows from the first dataset")->required();
    mixcmd->add_option("--nb", nb, "Rows from the second dataset")->required();
    mixcmd->add_option("--name-a", name_a, "Source tag for the first dataset (default: file stem)");
    mixcmd->add_option("--name-b", name_b, "Source tag for the second dataset (default: file stem)");
    mixcmd->add_option("--out", out_path, "Output dataset CSV")->required();
    add_common(mixcmd, common);
    mixcmd->callback([&] {
        action = [&] {
            const std::string ta = name_a.empty() ? dataset_id(a_path) : name_a;
            const std::string tb = name_b.empty() ? dataset_id(b_path) : name_b;
            const Dataset ds = mix(read_dataset(a_path), read_dataset(b_path), na, nb, resolve_seed(common), ta, tb);
            write_dataset(ds, out_path);
            out << "rows=" << ds.rows() << " columns=" << ds.arity() << '\n';
        };
    });

    // report
    std::string format_name = "markdown";
    auto* rep = app.add_subcommand("report", "Render results.csv and summary.csv from a grid run");
    rep->add_option("--in", in_path, "Grid output directory")->required();
    rep->add_option("--format", format_name, "markdown or csv");
    rep->add_option("--out", out_path, "Output file (default: stdout)");
    add_common(rep, common);
    rep->callback([&] {
        action = [&] {
            const fs::path dir = in_path;
            const auto report = ExperimentReport::from_csv(read_file(dir / "results.csv"), read_file(dir / "summary.csv"));
            write_or_print(out_path, emit_report(report, parse_report_format(format_name)), out);
        };
    });

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        const CLI::App* target = &app;
        for (const auto* sub : app.get_subcommands()) target = sub;
        out << target->help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (action) action();
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace strata
