#include "strata/synthgen.hpp"

#include "strata/config.hpp"
#include "strata/error.hpp"
#include "strata/parallel.hpp"
#include "strata/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

namespace strata {

namespace {

bool valid_weights(const std::vector<double>& w) {
    double sum = 0.0;
    for (double x : w) {
        if (!(x >= 0.0) || !std::isfinite(x)) return false;
        sum += x;
    }
    return sum > 0.0;
}

std::string join_numbers(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += format_number(v[i]);
    }
    return out;
}

std::string join_names(const std::vector<std::string>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += v[i];
    }
    return out;
}

} // namespace

void SynthSpec::validate() const {
    if (rows == 0) throw SpecError("synth spec: rows must be positive");
    if (!(signal >= 0.0 && signal <= 1.0)) throw SpecError("synth spec: signal must lie in [0, 1]");
    if (labels.empty()) throw SpecError("synth spec: at least one label is required");

    std::set<std::string> names;
    for (const auto& l : labels) {
        if (l.name.empty()) throw SpecError("synth spec: label without a name");
        if (!names.insert(l.name).second) throw SpecError("synth spec: duplicate column '" + l.name + "'");
        if (l.classes.empty()) throw SpecError("synth spec: label '" + l.name + "' has no classes");
        if (std::set<std::string>(l.classes.begin(), l.classes.end()).size() != l.classes.size())
            throw SpecError("synth spec: label '" + l.name + "' repeats a class");
        if (l.proportions.size() != l.classes.size())
            throw SpecError("synth spec: label '" + l.name + "' needs one proportion per class");
        double sum = 0.0;
        for (double p : l.proportions) {
            if (!(p >= 0.0 && p <= 1.0)) throw SpecError("synth spec: label '" + l.name + "' has a proportion outside [0, 1]");
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-9) throw SpecError("synth spec: proportions of '" + l.name + "' do not sum to 1");
    }

    for (const auto& a : attributes) {
        const std::string where = "synth spec: attribute '" + a.name + "'";
        if (a.name.empty()) throw SpecError("synth spec: attribute without a name");
        if (!names.insert(a.name).second) throw SpecError("synth spec: duplicate column '" + a.name + "'");
        if (a.depends_on >= labels.size()) throw SpecError(where + " depends on an unknown label");
        if (!(a.missing_rate >= 0.0 && a.missing_rate <= 1.0)) throw SpecError(where + ": missing rate outside [0, 1]");
        const std::size_t classes = labels[a.depends_on].classes.size();
        if (a.kind == ColumnKind::nominal) {
            if (a.categories.empty()) throw SpecError(where + " has no categories");
            if (std::set<std::string>(a.categories.begin(), a.categories.end()).size() != a.categories.size())
                throw SpecError(where + " repeats a category");
            if (a.base.size() != a.categories.size() || !valid_weights(a.base))
                throw SpecError(where + ": base weights must be nonnegative, one per category, not all zero");
            if (a.per_class.size() != classes) throw SpecError(where + " needs weights for every class");
            for (const auto& w : a.per_class)
                if (w.size() != a.categories.size() || !valid_weights(w))
                    throw SpecError(where + ": class weights must be nonnegative, one per category, not all zero");
        } else {
            if (!std::isfinite(a.base_mean) || !(a.base_sd >= 0.0) || !std::isfinite(a.base_sd))
                throw SpecError(where + ": invalid base distribution");
            if (a.class_mean.size() != classes || a.class_sd.size() != classes)
                throw SpecError(where + " needs a mean and sd for every class");
            for (std::size_t c = 0; c < classes; ++c)
                if (!std::isfinite(a.class_mean[c]) || !(a.class_sd[c] >= 0.0) || !std::isfinite(a.class_sd[c]))
                    throw SpecError(where + ": invalid class distribution");
        }
    }
}

SynthSpec SynthSpec::parse(std::string_view text) {
    Config cfg;
    try {
        cfg = Config::parse(text);
    } catch (const ConfigError& e) {
        throw SpecError(std::string("synth spec: ") + e.what());
    }
    SynthSpec spec;
    try {
        cfg.root.reject_unknown({"rows", "signal", "profile"});
        if (auto p = cfg.root.get("profile")) {
            if (*p != "default") throw SpecError("synth spec: unknown profile '" + *p + "'");
            spec = default_profile();
        }
        spec.rows = cfg.root.integer("rows", spec.rows);
        spec.signal = cfg.root.number("signal", spec.signal);

        auto upsert_label = [&](SynthLabel l) {
            for (auto& x : spec.labels)
                if (x.name == l.name) return void(x = std::move(l));
            spec.labels.push_back(std::move(l));
        };
        for (const auto& s : cfg.sections) {
            if (s.kind() != "label") continue;
            s.reject_unknown({"classes", "proportions"});
            SynthLabel l;
            l.name = s.name();
            l.classes = s.list("classes");
            l.proportions = s.numbers("proportions");
            upsert_label(std::move(l));
        }

        for (const auto& s : cfg.sections) {
            if (s.kind() == "label") continue;
            if (s.kind() != "attribute")
                throw SpecError("synth spec: unknown section kind '" + s.kind() + "' at line " + std::to_string(s.line()));
            SynthAttribute a;
            a.name = s.name();
            a.kind = parse_column_kind(s.text("kind", "nominal"));
            a.group = s.text("group", "");
            a.missing_rate = s.number("missing_rate", 0.0);
            if (spec.labels.empty()) throw SpecError("synth spec: attribute '" + a.name + "' declared without a label");
            const std::string dep = s.text("depends_on", spec.labels.front().name);
            auto it = std::find_if(spec.labels.begin(), spec.labels.end(), [&](const auto& l) { return l.name == dep; });
            if (it == spec.labels.end()) throw SpecError("synth spec: attribute '" + a.name + "' depends on unknown label '" + dep + "'");
            a.depends_on = static_cast<std::size_t>(it - spec.labels.begin());
            const auto& classes = it->classes;

            std::vector<std::vector<double>> per_class(classes.size());
            std::vector<bool> seen(classes.size(), false);
            for (const auto& [key, value] : s.entries()) {
                if (key.rfind("class.", 0) == 0) {
                    const std::string cls = key.substr(6);
                    auto c = std::find(classes.begin(), classes.end(), cls);
                    if (c == classes.end()) throw SpecError("synth spec: " + s.where(key) + ": unknown class '" + cls + "'");
                    const auto idx = static_cast<std::size_t>(c - classes.begin());
                    per_class[idx] = s.numbers(key);
                    seen[idx] = true;
                } else if (key != "kind" && key != "group" && key != "missing_rate" && key != "depends_on" &&
                           key != "categories" && key != "base") {
                    throw SpecError("synth spec: " + s.where(key) + ": unknown key '" + key + "'");
                }
            }
            for (std::size_t c = 0; c < classes.size(); ++c)
                if (!seen[c]) throw SpecError("synth spec: attribute '" + a.name + "' lacks class." + classes[c]);

            if (a.kind == ColumnKind::nominal) {
                a.categories = s.list("categories");
                a.base = s.numbers("base");
                a.per_class = std::move(per_class);
            } else {
                auto pair_of = [&](const std::vector<double>& v, const std::string& what) {
                    if (v.size() != 2) throw SpecError("synth spec: attribute '" + a.name + "' " + what + " needs 'mean, sd'");
                    return std::pair{v[0], v[1]};
                };
                std::tie(a.base_mean, a.base_sd) = pair_of(s.numbers("base"), "base");
                for (std::size_t c = 0; c < classes.size(); ++c) {
                    auto [m, sd] = pair_of(per_class[c], "class." + classes[c]);
                    a.class_mean.push_back(m);
                    a.class_sd.push_back(sd);
                }
            }
            auto existing = std::find_if(spec.attributes.begin(), spec.attributes.end(),
                                         [&](const auto& x) { return x.name == a.name; });
            if (existing != spec.attributes.end()) *existing = std::move(a);
            else spec.attributes.push_back(std::move(a));
        }
    } catch (const ConfigError& e) {
        throw SpecError(std::string("synth spec: ") + e.what());
    }
    spec.validate();
    return spec;
}

std::string SynthSpec::to_config() const {
    std::string out;
    out += "rows = " + std::to_string(rows) + "\n";
    out += "signal = " + format_number(signal) + "\n";
    for (const auto& l : labels) {
        out += "\n[label " + l.name + "]\n";
        out += "classes = " + join_names(l.classes) + "\n";
        out += "proportions = " + join_numbers(l.proportions) + "\n";
    }
    for (const auto& a : attributes) {
        const auto& classes = labels.at(a.depends_on).classes;
        out += "\n[attribute " + a.name + "]\n";
        out += "kind = " + std::string(to_string(a.kind)) + "\n";
        if (!a.group.empty()) out += "group = " + a.group + "\n";
        out += "depends_on = " + labels.at(a.depends_on).name + "\n";
        if (a.missing_rate > 0.0) out += "missing_rate = " + format_number(a.missing_rate) + "\n";
        if (a.kind == ColumnKind::nominal) {
            out += "categories = " + join_names(a.categories) + "\n";
            out += "base = " + join_numbers(a.base) + "\n";
            for (std::size_t c = 0; c < classes.size(); ++c)
                out += "class." + classes[c] + " = " + join_numbers(a.per_class.at(c)) + "\n";
        } else {
            out += "base = " + format_number(a.base_mean) + ", " + format_number(a.base_sd) + "\n";
            for (std::size_t c = 0; c < classes.size(); ++c)
                out += "class." + classes[c] + " = " + format_number(a.class_mean.at(c)) + ", " +
                       format_number(a.class_sd.at(c)) + "\n";
        }
    }
    return out;
}

SynthSpec SynthSpec::default_profile() {
    SynthSpec spec;
    spec.rows = 50000;
    spec.signal = 0.8;
    spec.labels.push_back({"stage", {"I", "II", "III", "IV"}, {0.70, 0.20, 0.09, 0.01}});

    // Class-conditional shapes come from a fixed stream so the profile is a
    // constant of the library.
    Rng rng(0x5eed'0f'2014ULL);
    const std::vector<std::string> groups{"site", "extension", "nodes", "history", "demographic", "treatment"};
    const std::size_t classes = spec.labels[0].classes.size();
    for (std::size_t i = 0; i < 36; ++i) {
        SynthAttribute a;
        char name[16];
        std::snprintf(name, sizeof name, "attr%02zu", i + 1);
        a.name = name;
        a.group = groups[i % groups.size()];
        a.depends_on = 0;
        a.missing_rate = (i % 5 == 4) ? 0.03 : 0.0;
        // Separation varies per attribute: a few strong, many weak.
        const double u = rng.uniform();
        const double strength = 0.15 + 0.85 * u * u;
        if (i % 3 == 2) {
            a.kind = ColumnKind::numeric;
            a.base_mean = 0.0;
            a.base_sd = 1.0 + strength;
            for (std::size_t c = 0; c < classes; ++c) {
                a.class_mean.push_back(std::round(strength * rng.normal() * 1000.0) / 1000.0);
                a.class_sd.push_back(std::round((0.8 + 0.4 * rng.uniform()) * 1000.0) / 1000.0);
            }
        } else {
            a.kind = ColumnKind::nominal;
            const std::size_t k = 3 + (i % 6);
            for (std::size_t v = 0; v < k; ++v) {
                a.categories.push_back(std::string(1, static_cast<char>('a' + v)));
                a.base.push_back(std::round((0.5 + rng.uniform()) * 1000.0) / 1000.0);
            }
            for (std::size_t c = 0; c < classes; ++c) {
                std::vector<double> w(k);
                for (std::size_t v = 0; v < k; ++v)
                    w[v] = std::round(a.base[v] * std::exp(1.5 * strength * rng.normal()) * 1000.0) / 1000.0 + 0.001;
                a.per_class.push_back(std::move(w));
            }
        }
        spec.attributes.push_back(std::move(a));
    }
    return spec;
}

Dataset generate(const SynthSpec& spec, std::uint64_t seed, unsigned jobs) {
    spec.validate();
    std::vector<Column> columns;
    for (const auto& a : spec.attributes) {
        Column c(a.name, a.kind, a.group);
        for (const auto& cat : a.categories) c.intern(cat);
        columns.push_back(std::move(c));
    }
    for (const auto& l : spec.labels) {
        Column c(l.name, ColumnKind::nominal);
        for (const auto& cls : l.classes) c.intern(cls);
        columns.push_back(std::move(c));
    }
    const std::size_t arity = columns.size();
    const std::size_t first_label = spec.attributes.size();

    std::vector<Cell> cells(spec.rows * arity);
    auto fill_row = [&](std::size_t r) {
        Rng rng(mix_seed(seed, r));
        Cell* out = cells.data() + r * arity;
        std::vector<std::size_t> cls(spec.labels.size());
        for (std::size_t l = 0; l < spec.labels.size(); ++l) {
            cls[l] = rng.weighted(spec.labels[l].proportions);
            out[first_label + l] = Cell::nominal(static_cast<CategoryId>(cls[l]));
        }
        for (std::size_t i = 0; i < spec.attributes.size(); ++i) {
            const auto& a = spec.attributes[i];
            const std::size_t c = cls[a.depends_on];
            const bool conditional = rng.uniform() < spec.signal;
            Cell value;
            if (a.kind == ColumnKind::nominal) {
                const auto& w = conditional ? a.per_class[c] : a.base;
                value = Cell::nominal(static_cast<CategoryId>(rng.weighted(w)));
            } else {
                value = conditional ? Cell::numeric(rng.normal(a.class_mean[c], a.class_sd[c]))
                                    : Cell::numeric(rng.normal(a.base_mean, a.base_sd));
            }
            // Always consume the missingness draw so streams stay aligned.
            const bool missing = rng.uniform() < a.missing_rate;
            out[i] = missing ? Cell{} : value;
        }
    };
    constexpr std::size_t block = 1024;
    const std::size_t blocks = (spec.rows + block - 1) / block;
    parallel_for(blocks, jobs, [&](std::size_t b) {
        const std::size_t end = std::min(spec.rows, (b + 1) * block);
        for (std::size_t r = b * block; r < end; ++r) fill_row(r);
    });

    Dataset ds(std::move(columns));
    ds.reserve(spec.rows);
    for (std::size_t r = 0; r < spec.rows; ++r) ds.add_row(std::span<const Cell>(cells.data() + r * arity, arity));
    ds.set_label(spec.labels.front().name);
    return ds;
}

Dataset mix(const Dataset& a, const Dataset& b, std::size_t n_a, std::size_t n_b, std::uint64_t seed,
            std::string_view name_a, std::string_view name_b) {
    if (name_a == name_b) throw SchemaError("mix: source names must differ");
    std::vector<std::string> shared;
    for (const auto& col : a.columns()) {
        if (col.name() == source_column) continue;
        auto j = b.find_column(col.name());
        if (!j) continue;
        if (b.column(*j).kind() != col.kind())
            throw SchemaError("incompatible schemas: column '" + col.name() + "' differs in kind");
        shared.push_back(col.name());
    }
    if (shared.empty()) throw SchemaError("incompatible schemas: no shared columns");
    if (n_a > a.rows()) throw InsufficientDataError(n_a, a.rows());
    if (n_b > b.rows()) throw InsufficientDataError(n_b, b.rows());

    Rng rng_a(mix_seed(seed, 1));
    Rng rng_b(mix_seed(seed, 2));
    const auto idx_a = sample_indices(a.rows(), n_a, rng_a);
    const auto idx_b = sample_indices(b.rows(), n_b, rng_b);

    const Dataset part_a = a.project(shared).select_rows(idx_a);
    // b is re-encoded onto a's categories; conform appends any b-only ones.
    const Dataset part_b = conform(b.project(shared).select_rows(idx_b), part_a.columns());

    Dataset out(part_b.columns());
    if (part_a.label()) out.set_label(*part_a.label());
    else if (part_b.label()) out.set_label(*part_b.label());
    out.reserve(n_a + n_b);
    for (std::size_t r = 0; r < part_a.rows(); ++r) out.add_row(part_a.row(r));
    for (std::size_t r = 0; r < part_b.rows(); ++r) out.add_row(part_b.row(r));

    Column source(std::string(source_column), ColumnKind::nominal);
    const CategoryId id_a = source.intern(name_a);
    const CategoryId id_b = source.intern(name_b);
    std::vector<Cell> tags;
    tags.reserve(n_a + n_b);
    tags.insert(tags.end(), n_a, Cell::nominal(id_a));
    tags.insert(tags.end(), n_b, Cell::nominal(id_b));
    return out.with_column(std::move(source), tags);
}

} // namespace strata
