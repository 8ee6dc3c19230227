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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace strata;

namespace {

py::object cell_value(const Dataset& ds, std::size_t r, std::size_t c) {
    const Cell& cell = ds.at(r, c);
    if (cell.missing()) return py::none();
    if (cell.is_numeric()) return py::float_(cell.number());
    return py::str(ds.column(c).category_name(cell.category()));
}

std::vector<std::size_t> counts_only(const std::vector<ClassCount>& v) {
    std::vector<std::size_t> out;
    for (const auto& c : v) out.push_back(c.count);
    return out;
}

std::vector<ClassCount> as_counts(const std::vector<std::size_t>& counts) {
    std::vector<ClassCount> out;
    for (std::size_t i = 0; i < counts.size(); ++i) out.push_back({static_cast<CategoryId>(i), counts[i]});
    return out;
}

py::dict cell_dict(const EvalCell& c) {
    py::dict d;
    d["dataset"] = c.dataset;
    d["label"] = c.label;
    d["strategy"] = std::string(to_string(c.strategy));
    d["classifier"] = std::string(to_string(c.classifier));
    d["sample_size"] = c.sample_size;
    d["accuracies"] = c.accuracies;
    d["best"] = c.best;
    d["mean"] = c.mean;
    d["stddev"] = c.stddev;
    d["seed"] = c.seed;
    d["status"] = std::string(to_string(c.status));
    d["reason"] = c.reason;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Sampling, classification and evaluation core";

    auto base = py::register_exception<Error>(m, "StrataError", PyExc_RuntimeError);
    py::register_exception<CapacityError>(m, "CapacityError", base.ptr());
    py::register_exception<InsufficientDataError>(m, "InsufficientDataError", base.ptr());
    py::register_exception<SpecError>(m, "SpecError", base.ptr());
    py::register_exception<SchemaError>(m, "SchemaError", base.ptr());
    py::register_exception<FormatError>(m, "FormatError", base.ptr());

    py::class_<Dataset>(m, "Dataset")
        .def_property_readonly("rows", &Dataset::rows)
        .def_property_readonly("arity", &Dataset::arity)
        .def_property_readonly("label", [](const Dataset& ds) { return ds.label(); })
        .def_property_readonly("columns",
                               [](const Dataset& ds) {
                                   std::vector<std::string> names;
                                   for (const auto& c : ds.columns()) names.push_back(c.name());
                                   return names;
                               })
        .def("set_label", &Dataset::set_label, py::arg("name"))
        .def("value", &cell_value, py::arg("row"), py::arg("column"))
        .def("column_values",
             [](const Dataset& ds, const std::string& name) {
                 const std::size_t c = ds.column_index(name);
                 py::list out;
                 for (std::size_t r = 0; r < ds.rows(); ++r) out.append(cell_value(ds, r, c));
                 return out;
             },
             py::arg("name"))
        .def("to_csv", &dataset_to_csv)
        .def("schema_csv", &schema_to_csv)
        .def("__len__", &Dataset::rows)
        .def("__eq__", [](const Dataset& a, const Dataset& b) { return a == b; });

    m.def("read_dataset", [](const std::string& path) { return read_dataset(path); }, py::arg("path"));
    m.def("write_dataset", [](const Dataset& ds, const std::string& path) { write_dataset(ds, path); }, py::arg("dataset"),
          py::arg("path"));
    m.def("dataset_from_csv", &dataset_from_csv, py::arg("data_csv"), py::arg("schema_csv"));

    m.def("recode_survival_months", &recode_survival_months, py::arg("raw"));
    m.def(
        "parse_records",
        [](const std::string& dictionary, const std::vector<std::string>& lines, std::size_t batch_size) {
            auto result = parse_records(lines, load_dictionary(dictionary), batch_size);
            return py::make_tuple(std::move(result.dataset), result.rejected);
        },
        py::arg("dictionary"), py::arg("lines"), py::arg("batch_size") = default_batch_size);

    m.def("information_gain", [](const Dataset& ds, const std::string& label, const std::string& attr) {
        return information_gain(ds, label, attr);
    }, py::arg("dataset"), py::arg("label"), py::arg("attribute"));

    m.def(
        "synthesize",
        [](const std::string& spec_text, std::uint64_t seed, std::optional<std::size_t> rows, std::optional<double> signal,
           unsigned jobs) {
            SynthSpec spec = spec_text == "default" ? SynthSpec::default_profile() : SynthSpec::parse(spec_text);
            if (rows) spec.rows = *rows;
            if (signal) spec.signal = *signal;
            return generate(spec, seed, jobs);
        },
        py::arg("spec") = "default", py::arg("seed") = 0, py::arg("rows") = py::none(), py::arg("signal") = py::none(),
        py::arg("jobs") = 1, "Generate a dataset from spec text, or 'default' for the built-in profile.");
    m.def(
        "mix",
        [](const Dataset& a, const Dataset& b, std::size_t n_a, std::size_t n_b, std::uint64_t seed,
           const std::string& name_a, const std::string& name_b) { return mix(a, b, n_a, n_b, seed, name_a, name_b); },
        py::arg("a"), py::arg("b"), py::arg("n_a"), py::arg("n_b"), py::arg("seed") = 0, py::arg("name_a") = "a",
        py::arg("name_b") = "b");

    m.def("allocate_proportional",
          [](const std::vector<std::size_t>& counts, std::size_t n) { return counts_only(allocate_proportional(as_counts(counts), n)); },
          py::arg("counts"), py::arg("n"));
    m.def(
        "allocate_balanced",
        [](const std::vector<std::size_t>& counts, std::size_t n, bool with_replacement) {
            const auto a = allocate_balanced(as_counts(counts), n, with_replacement);
            std::vector<std::size_t> quotas(counts.size(), 0);
            for (const auto& q : a.quotas) quotas[static_cast<std::size_t>(q.label)] = q.quota;
            return py::make_tuple(quotas, a.shortfall);
        },
        py::arg("counts"), py::arg("n"), py::arg("with_replacement") = false,
        "Per-class quotas (0 for excluded classes) and the shortfall.");
    m.def(
        "sample",
        [](const Dataset& ds, const std::string& label, const std::string& strategy, std::size_t n, std::uint64_t seed,
           double minority_ratio, bool with_replacement, unsigned jobs) {
            SamplingPlan plan;
            plan.strategy = parse_strategy(strategy);
            plan.n = n;
            plan.seed = seed;
            plan.minority_ratio = minority_ratio;
            plan.with_replacement = with_replacement;
            return draw_sample(ds, label, plan, jobs);
        },
        py::arg("dataset"), py::arg("label"), py::arg("strategy"), py::arg("n"), py::arg("seed") = 0,
        py::arg("minority_ratio") = 0.01, py::arg("with_replacement") = false, py::arg("jobs") = 1);

    m.def(
        "train_and_predict",
        [](const std::string& classifier, const Dataset& train, const Dataset& test, std::size_t k, double alpha,
           std::size_t min_leaf) {
            ClassifierParams params;
            params.knn.k = k;
            params.alpha = alpha;
            params.tree.min_leaf = min_leaf;
            const Model model = train_model(parse_classifier(classifier), train, params);
            const Dataset aligned = conform(test, model_schema(model));
            const Column& label = model_schema(model)[model_label_index(model)];
            std::vector<std::string> out;
            for (CategoryId id : predict_all(model, aligned)) out.push_back(label.category_name(id));
            return out;
        },
        py::arg("classifier"), py::arg("train"), py::arg("test"), py::arg("k") = 10, py::arg("alpha") = 1.0,
        py::arg("min_leaf") = 2, "Train on a labelled dataset and return predicted class names for test.");

    m.def(
        "run_cell",
        [](const Dataset& ds, const std::string& label, const std::string& strategy, const std::string& classifier,
           std::size_t n, std::uint64_t seed, std::size_t iterations) {
            EvalOptions options;
            options.iterations = iterations;
            return cell_dict(run_cell(ds, label, parse_strategy(strategy), parse_classifier(classifier), n, seed, options));
        },
        py::arg("dataset"), py::arg("label"), py::arg("strategy"), py::arg("classifier"), py::arg("n"),
        py::arg("seed") = 0, py::arg("iterations") = 10);

    m.def(
        "run_grid",
        [](const std::string& config_text, const std::map<std::string, Dataset>& datasets, unsigned jobs) {
            GridConfig cfg = GridConfig::parse(config_text);
            if (cfg.datasets.empty())
                for (const auto& [name, ds] : datasets) cfg.datasets.push_back(name);
            const auto report = run_grid(cfg, datasets, jobs);
            py::dict out;
            py::list cells;
            for (const auto& c : report.cells) cells.append(cell_dict(c));
            out["cells"] = cells;
            out["results_csv"] = report.results_csv();
            out["summary_csv"] = report.summary_csv();
            out["markdown"] = emit_report(report, ReportFormat::markdown);
            return out;
        },
        py::arg("config"), py::arg("datasets"), py::arg("jobs") = 1);

    m.def("format_percent", &format_percent, py::arg("fraction"));

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int code = run_cli(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run a strata-bench subcommand; returns (exit code, stdout, stderr).");
}
