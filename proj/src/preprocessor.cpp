#include "strata/preprocessor.hpp"

#include "strata/config.hpp"
#include "strata/error.hpp"
#include "strata/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <map>
#include <unordered_set>

namespace strata {

int recode_survival_months(std::string_view raw) {
    if (raw.size() != 4 || !std::all_of(raw.begin(), raw.end(), [](char c) { return c >= '0' && c <= '9'; }))
        throw FormatError("survival time recode must be 4 digits (YYMM), got '" + std::string(raw) + "'");
    const int years = (raw[0] - '0') * 10 + (raw[1] - '0');
    const int months = (raw[2] - '0') * 10 + (raw[3] - '0');
    return 12 * years + months;
}

std::string_view to_string(SurvivalOutcome outcome) {
    switch (outcome) {
    case SurvivalOutcome::survived: return "survived";
    case SurvivalOutcome::not_survived: return "not_survived";
    case SurvivalOutcome::excluded: return "excluded";
    }
    return "excluded";
}

SurvivalOutcome derive_survival_label(int months, VitalStatus vital_status, std::string_view cause_of_death,
                                      std::string_view studied_cancer, int threshold_months) {
    if (months >= threshold_months) return SurvivalOutcome::survived;
    if (vital_status == VitalStatus::dead && cause_of_death == studied_cancer) return SurvivalOutcome::not_survived;
    return SurvivalOutcome::excluded;
}

// ---------------------------------------------------------------------------

namespace {

std::optional<int> parse_int(std::string_view s) {
    s = trim(s);
    int v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::pair<int, int> parse_era_range(std::string_view text, std::size_t line) {
    text = trim(text);
    auto bad = [&]() -> std::pair<int, int> {
        throw FormatError("metastasis mapping line " + std::to_string(line) + ": bad era_range '" +
                          std::string(text) + "'");
    };
    const auto dash = text.find('-');
    if (dash == std::string_view::npos) {
        auto y = parse_int(text);
        return y ? std::pair{*y, *y} : bad();
    }
    auto lo_text = trim(text.substr(0, dash));
    auto hi_text = trim(text.substr(dash + 1));
    auto lo = lo_text.empty() ? std::optional<int>(0) : parse_int(lo_text);
    auto hi = hi_text.empty() ? std::optional<int>(9999) : parse_int(hi_text);
    if (!lo || !hi || *lo > *hi) return bad();
    return {*lo, *hi};
}

} // namespace

MetastasisMapping MetastasisMapping::from_csv(std::string_view text) {
    auto records = csv_parse(text);
    if (records.empty() || records.front() != std::vector<std::string>{"era_range", "source_column", "code", "target_category"})
        throw FormatError("metastasis mapping: header must be era_range,source_column,code,target_category");
    MetastasisMapping m;
    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto& r = records[i];
        if (r.size() != 4)
            throw FormatError("metastasis mapping line " + std::to_string(i + 1) + ": expected 4 fields");
        if (trim(r[0]) == "*") {
            if (!r[1].empty() || !r[2].empty() || r[3].empty())
                throw FormatError("metastasis mapping line " + std::to_string(i + 1) +
                                  ": fallback row must be `*,,,<category>`");
            if (m.fallback) throw FormatError("metastasis mapping: fallback declared twice");
            m.fallback = r[3];
            continue;
        }
        auto [lo, hi] = parse_era_range(r[0], i + 1);
        m.rules.push_back({lo, hi, std::string(trim(r[1])), std::string(trim(r[2])), r[3]});
    }
    return m;
}

std::vector<std::string> MetastasisMapping::categories() const {
    std::vector<std::string> out;
    for (const auto& r : rules)
        if (std::find(out.begin(), out.end(), r.target) == out.end()) out.push_back(r.target);
    if (fallback && std::find(out.begin(), out.end(), *fallback) == out.end()) out.push_back(*fallback);
    return out;
}

std::string derive_metastasis_label(const Dataset& ds, std::size_t row, const std::vector<std::string>& eod_columns,
                                    const std::vector<std::string>& cs_columns, const std::string& era_column,
                                    const MetastasisMapping& mapping) {
    const std::size_t era_col = ds.column_index(era_column);
    const Cell& era_cell = ds.at(row, era_col);
    std::optional<int> era;
    if (era_cell.is_numeric()) era = static_cast<int>(era_cell.number());
    else if (era_cell.is_nominal()) era = parse_int(ds.format_cell(era_col, era_cell));
    if (!era) throw MappingError("row " + std::to_string(row) + ": era column '" + era_column + "' is not a year");

    const auto& columns = *era < mapping.cs_first_year ? eod_columns : cs_columns;
    std::string seen;
    for (const auto& name : columns) {
        const std::size_t c = ds.column_index(name);
        const Cell& cell = ds.at(row, c);
        if (cell.missing()) continue;
        const std::string code = ds.format_cell(c, cell);
        for (const auto& rule : mapping.rules)
            if (*era >= rule.era_from && *era <= rule.era_to && rule.source_column == name && rule.code == code)
                return rule.target;
        if (!seen.empty()) seen += ", ";
        seen += name + "=" + code;
    }
    if (mapping.fallback) return *mapping.fallback;
    throw MappingError("no metastasis mapping for era " + std::to_string(*era) + " and code " +
                       (seen.empty() ? std::string("<missing>") : seen));
}

// ---------------------------------------------------------------------------

void FilterReport::merge(const FilterReport& other) {
    removed_by_missing.insert(removed_by_missing.end(), other.removed_by_missing.begin(), other.removed_by_missing.end());
    removed_by_correlation.insert(removed_by_correlation.end(), other.removed_by_correlation.begin(),
                                  other.removed_by_correlation.end());
    removed_by_infogain.insert(removed_by_infogain.end(), other.removed_by_infogain.begin(),
                               other.removed_by_infogain.end());
    rows_removed += other.rows_removed;
}

std::string FilterReport::to_csv() const {
    std::string out = "stage,column,other,value\n";
    for (const auto& m : removed_by_missing) out += csv_join({"missing", m.column, "", format_number(m.fraction)}) + '\n';
    for (const auto& c : removed_by_correlation)
        out += csv_join({"correlation", c.dropped, c.kept, format_number(c.score)}) + '\n';
    for (const auto& g : removed_by_infogain) out += csv_join({"infogain", g.column, "", format_number(g.gain)}) + '\n';
    if (rows_removed) out += csv_join({"rows", "", "", std::to_string(rows_removed)}) + '\n';
    return out;
}

std::pair<Dataset, FilterReport> remove_missing(const Dataset& ds, double col_threshold, RowPolicy row_policy) {
    if (!(col_threshold >= 0.0 && col_threshold <= 1.0))
        throw SchemaError("remove_missing: col_threshold must lie in [0, 1]");
    FilterReport report;
    std::vector<std::string> keep;
    const std::size_t n = ds.rows();
    for (std::size_t c = 0; c < ds.arity(); ++c) {
        std::size_t missing = 0;
        for (std::size_t r = 0; r < n; ++r) missing += ds.at(r, c).missing();
        const double fraction = n ? static_cast<double>(missing) / static_cast<double>(n) : 0.0;
        const auto& name = ds.column(c).name();
        if (fraction > col_threshold && name != ds.label())
            report.removed_by_missing.push_back({name, fraction});
        else
            keep.push_back(name);
    }
    if (keep.empty() || (ds.label() && keep.size() == 1 && ds.arity() > 1))
        throw DegenerateDatasetError("remove_missing: every column exceeds the missing threshold");
    Dataset out = report.removed_by_missing.empty() ? ds : ds.project(keep);
    if (row_policy == RowPolicy::drop_any_missing) {
        std::vector<std::size_t> rows;
        for (std::size_t r = 0; r < out.rows(); ++r) {
            auto cells = out.row(r);
            if (std::none_of(cells.begin(), cells.end(), [](const Cell& c) { return c.missing(); })) rows.push_back(r);
        }
        if (rows.size() != out.rows()) {
            report.rows_removed = out.rows() - rows.size();
            out = out.select_rows(rows);
        }
    }
    return {std::move(out), std::move(report)};
}

double association(const Dataset& ds, std::size_t a, std::size_t b) {
    const ColumnKind ka = ds.column(a).kind();
    if (ka != ds.column(b).kind()) return 0.0;
    if (ka == ColumnKind::numeric) {
        double n = 0, sx = 0, sy = 0;
        for (std::size_t r = 0; r < ds.rows(); ++r) {
            const Cell& x = ds.at(r, a);
            const Cell& y = ds.at(r, b);
            if (x.missing() || y.missing()) continue;
            n += 1;
            sx += x.number();
            sy += y.number();
        }
        if (n < 2) return 0.0;
        const double mx = sx / n, my = sy / n;
        double sxx = 0, syy = 0, sxy = 0;
        for (std::size_t r = 0; r < ds.rows(); ++r) {
            const Cell& x = ds.at(r, a);
            const Cell& y = ds.at(r, b);
            if (x.missing() || y.missing()) continue;
            const double dx = x.number() - mx, dy = y.number() - my;
            sxx += dx * dx;
            syy += dy * dy;
            sxy += dx * dy;
        }
        if (sxx <= 0 || syy <= 0) return 0.0;
        return std::min(1.0, std::abs(sxy) / std::sqrt(sxx * syy));
    }
    // Cramér's V over observed categories.
    std::map<std::pair<CategoryId, CategoryId>, double> joint;
    std::map<CategoryId, double> rows_a, rows_b;
    double n = 0;
    for (std::size_t r = 0; r < ds.rows(); ++r) {
        const Cell& x = ds.at(r, a);
        const Cell& y = ds.at(r, b);
        if (x.missing() || y.missing()) continue;
        joint[{x.category(), y.category()}] += 1;
        rows_a[x.category()] += 1;
        rows_b[y.category()] += 1;
        n += 1;
    }
    const std::size_t k = std::min(rows_a.size(), rows_b.size());
    if (k < 2) return 0.0;
    double chi2 = 0;
    for (const auto& [ca, na] : rows_a) {
        for (const auto& [cb, nb] : rows_b) {
            const double expected = na * nb / n;
            auto it = joint.find({ca, cb});
            const double observed = it == joint.end() ? 0.0 : it->second;
            chi2 += (observed - expected) * (observed - expected) / expected;
        }
    }
    return std::min(1.0, std::sqrt(chi2 / (n * static_cast<double>(k - 1))));
}

std::pair<Dataset, FilterReport> correlation_filter(const Dataset& ds, double threshold) {
    if (!(threshold > 0.0 && threshold <= 1.0)) throw SchemaError("correlation_filter: threshold must lie in (0, 1]");
    FilterReport report;
    std::vector<bool> dropped(ds.arity(), false);
    const auto label = ds.label();
    for (std::size_t i = 0; i < ds.arity(); ++i) {
        if (dropped[i] || ds.column(i).group().empty()) continue;
        for (std::size_t j = i + 1; j < ds.arity(); ++j) {
            if (dropped[j] || ds.column(j).group() != ds.column(i).group()) continue;
            if (ds.column(j).name() == label || ds.column(i).name() == label) continue;
            const double score = association(ds, i, j);
            if (score >= threshold) {
                dropped[j] = true;
                report.removed_by_correlation.push_back({ds.column(i).name(), ds.column(j).name(), score});
            }
        }
    }
    if (report.removed_by_correlation.empty()) return {ds, std::move(report)};
    std::vector<std::string> keep;
    for (std::size_t i = 0; i < ds.arity(); ++i)
        if (!dropped[i]) keep.push_back(ds.column(i).name());
    return {ds.project(keep), std::move(report)};
}

namespace {

double entropy_bits(const std::vector<double>& counts, double total) {
    double h = 0.0;
    for (double c : counts)
        if (c > 0) h -= (c / total) * std::log2(c / total);
    return h;
}

} // namespace

double label_entropy(const Dataset& ds, std::string_view label) {
    const std::size_t lc = ds.column_index(label);
    std::vector<double> counts(ds.column(lc).category_count(), 0.0);
    double n = 0;
    for (std::size_t r = 0; r < ds.rows(); ++r) {
        const Cell& y = ds.at(r, lc);
        if (y.missing()) continue;
        counts[static_cast<std::size_t>(y.category())] += 1;
        n += 1;
    }
    return n > 0 ? entropy_bits(counts, n) : 0.0;
}

double information_gain(const Dataset& ds, std::string_view label, std::string_view attr, std::size_t numeric_bins) {
    const std::size_t lc = ds.column_index(label);
    const std::size_t ac = ds.column_index(attr);
    if (ds.column(lc).kind() != ColumnKind::nominal)
        throw SchemaError("information_gain: label '" + std::string(label) + "' must be nominal");
    if (numeric_bins == 0) throw SchemaError("information_gain: numeric_bins must be >= 1");
    const Column& acol = ds.column(ac);
    const std::size_t classes = ds.column(lc).category_count();

    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < ds.rows(); ++r)
        if (!ds.at(r, lc).missing()) rows.push_back(r);
    if (rows.size() <= 1) return 0.0;

    double lo = 0, hi = 0;
    bool seen = false;
    if (acol.kind() == ColumnKind::numeric) {
        for (std::size_t r : rows) {
            const Cell& x = ds.at(r, ac);
            if (x.missing()) continue;
            lo = seen ? std::min(lo, x.number()) : x.number();
            hi = seen ? std::max(hi, x.number()) : x.number();
            seen = true;
        }
    }
    const std::size_t bins = acol.kind() == ColumnKind::numeric ? numeric_bins : acol.category_count();
    // Last bin holds missing cells.
    std::vector<std::vector<double>> table(bins + 1, std::vector<double>(classes, 0.0));
    std::vector<double> label_counts(classes, 0.0);
    for (std::size_t r : rows) {
        const std::size_t y = static_cast<std::size_t>(ds.at(r, lc).category());
        const Cell& x = ds.at(r, ac);
        std::size_t bin = bins;
        if (x.is_nominal()) {
            bin = static_cast<std::size_t>(x.category());
        } else if (x.is_numeric()) {
            bin = 0;
            if (hi > lo) {
                const double pos = (x.number() - lo) / (hi - lo) * static_cast<double>(numeric_bins);
                bin = std::min(numeric_bins - 1, static_cast<std::size_t>(pos));
            }
        }
        table[bin][y] += 1;
        label_counts[y] += 1;
    }
    const double n = static_cast<double>(rows.size());
    const double h = entropy_bits(label_counts, n);
    double conditional = 0.0;
    for (const auto& counts : table) {
        double m = 0;
        for (double c : counts) m += c;
        if (m > 0) conditional += (m / n) * entropy_bits(counts, m);
    }
    return std::clamp(h - conditional, 0.0, h);
}

std::pair<Dataset, FilterReport> information_gain_filter(const Dataset& ds, std::string_view label, double min_gain,
                                                         std::size_t numeric_bins) {
    if (min_gain < 0) throw SchemaError("information_gain_filter: min_gain must be >= 0");
    ds.column_index(label);
    FilterReport report;
    std::vector<std::string> keep;
    std::size_t predictors = 0;
    for (const auto& col : ds.columns()) {
        if (col.name() == label) {
            keep.push_back(col.name());
            continue;
        }
        ++predictors;
        const double gain = information_gain(ds, label, col.name(), numeric_bins);
        if (gain < min_gain) report.removed_by_infogain.push_back({col.name(), gain});
        else keep.push_back(col.name());
    }
    if (predictors > 0 && keep.size() == 1)
        throw DegenerateDatasetError("information_gain_filter: every predictor falls below min_gain");
    if (report.removed_by_infogain.empty()) return {ds, std::move(report)};
    return {ds.project(keep), std::move(report)};
}

// ---------------------------------------------------------------------------

PreprocessConfig parse_preprocess_config(std::string_view text, const std::string& base_dir) {
    const Config cfg = Config::parse(text);
    PreprocessConfig out;
    const auto& root = cfg.root;
    root.reject_unknown({"label", "drop_columns", "missing.threshold", "missing.row_policy", "correlation.threshold",
                         "infogain.min_gain", "infogain.bins"});
    if (auto l = root.get("label")) out.label = *l;
    out.drop_columns = root.list("drop_columns");
    out.missing_threshold = root.number("missing.threshold", out.missing_threshold);
    const auto policy = root.text("missing.row_policy", "drop_any_missing");
    if (policy == "drop_any_missing") out.row_policy = RowPolicy::drop_any_missing;
    else if (policy == "keep") out.row_policy = RowPolicy::keep;
    else throw ConfigError(root.where("missing.row_policy") + ": expected drop_any_missing or keep");
    out.correlation_threshold = root.number("correlation.threshold", out.correlation_threshold);
    out.min_gain = root.number("infogain.min_gain", out.min_gain);
    out.numeric_bins = root.integer("infogain.bins", out.numeric_bins);

    for (const auto& sec : cfg.sections) {
        if (sec.kind() == "survival") {
            sec.reject_unknown({"months_column", "vital_column", "cod_column", "alive_code", "dead_code",
                                "studied_cancer", "threshold_months", "output", "drop_excluded"});
            SurvivalConfig s;
            s.months_column = sec.require("months_column");
            s.vital_column = sec.require("vital_column");
            s.cod_column = sec.require("cod_column");
            s.studied_cancer = sec.require("studied_cancer");
            s.alive_code = sec.text("alive_code", s.alive_code);
            s.dead_code = sec.text("dead_code", s.dead_code);
            s.threshold_months = static_cast<int>(sec.integer("threshold_months", 60));
            s.output = sec.text("output", s.output);
            s.drop_excluded = sec.flag("drop_excluded", true);
            out.survival = std::move(s);
        } else if (sec.kind() == "metastasis") {
            sec.reject_unknown({"mapping", "eod_columns", "cs_columns", "era_column", "output", "cs_first_year"});
            MetastasisConfig m;
            std::filesystem::path path = sec.require("mapping");
            if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
            m.mapping = MetastasisMapping::from_csv(read_file(path));
            m.mapping.cs_first_year = static_cast<int>(sec.integer("cs_first_year", 2004));
            m.eod_columns = sec.list("eod_columns");
            m.cs_columns = sec.list("cs_columns");
            m.era_column = sec.require("era_column");
            m.output = sec.text("output", m.output);
            out.metastasis = std::move(m);
        } else {
            throw ConfigError("line " + std::to_string(sec.line()) + ": unknown section [" + sec.kind() + "]");
        }
    }
    return out;
}

namespace {

std::string months_text(const Dataset& ds, std::size_t col, const Cell& cell) {
    if (cell.is_numeric()) {
        const long v = std::lround(cell.number());
        std::string s = std::to_string(v);
        return s.size() < 4 ? std::string(4 - s.size(), '0') + s : s;
    }
    return ds.format_cell(col, cell);
}

Dataset add_survival(const Dataset& ds, const SurvivalConfig& cfg, FilterReport& report) {
    const std::size_t mc = ds.column_index(cfg.months_column);
    const std::size_t vc = ds.column_index(cfg.vital_column);
    const std::size_t cc = ds.column_index(cfg.cod_column);
    Column col(cfg.output, ColumnKind::nominal);
    const CategoryId survived = col.intern(to_string(SurvivalOutcome::survived));
    const CategoryId not_survived = col.intern(to_string(SurvivalOutcome::not_survived));
    std::vector<Cell> values(ds.rows());
    std::vector<std::size_t> keep;
    for (std::size_t r = 0; r < ds.rows(); ++r) {
        const Cell& m = ds.at(r, mc);
        const Cell& v = ds.at(r, vc);
        SurvivalOutcome outcome = SurvivalOutcome::excluded;
        if (!m.missing() && !v.missing()) {
            const std::string vital = ds.format_cell(vc, v);
            VitalStatus status;
            if (vital == cfg.alive_code) status = VitalStatus::alive;
            else if (vital == cfg.dead_code) status = VitalStatus::dead;
            else throw FormatError("row " + std::to_string(r) + ": unknown vital status '" + vital + "'");
            const Cell& cod = ds.at(r, cc);
            outcome = derive_survival_label(recode_survival_months(months_text(ds, mc, m)), status,
                                            cod.missing() ? std::string() : ds.format_cell(cc, cod),
                                            cfg.studied_cancer, cfg.threshold_months);
        }
        if (outcome == SurvivalOutcome::survived) values[r] = Cell::nominal(survived);
        else if (outcome == SurvivalOutcome::not_survived) values[r] = Cell::nominal(not_survived);
        if (outcome != SurvivalOutcome::excluded || !cfg.drop_excluded) keep.push_back(r);
    }
    Dataset out = ds.with_column(std::move(col), values);
    if (keep.size() != out.rows()) {
        report.rows_removed += out.rows() - keep.size();
        out = out.select_rows(keep);
    }
    return out;
}

Dataset add_metastasis(const Dataset& ds, const MetastasisConfig& cfg) {
    Column col(cfg.output, ColumnKind::nominal);
    for (const auto& c : cfg.mapping.categories()) col.intern(c);
    std::vector<Cell> values(ds.rows());
    for (std::size_t r = 0; r < ds.rows(); ++r)
        values[r] = Cell::nominal(col.intern(
            derive_metastasis_label(ds, r, cfg.eod_columns, cfg.cs_columns, cfg.era_column, cfg.mapping)));
    return ds.with_column(std::move(col), values);
}

} // namespace

std::pair<Dataset, FilterReport> preprocess(const Dataset& input, const PreprocessConfig& config) {
    FilterReport report;
    Dataset ds = input;
    if (config.survival) ds = add_survival(ds, *config.survival, report);
    if (config.metastasis) ds = add_metastasis(ds, *config.metastasis);
    if (!config.drop_columns.empty()) ds = ds.drop_columns(config.drop_columns);
    if (config.label) ds.set_label(*config.label);

    auto [a, r1] = remove_missing(ds, config.missing_threshold, config.row_policy);
    report.merge(r1);
    auto [b, r2] = correlation_filter(a, config.correlation_threshold);
    report.merge(r2);
    if (!b.label()) return {std::move(b), std::move(report)};
    auto [c, r3] = information_gain_filter(b, *b.label(), config.min_gain, config.numeric_bins);
    report.merge(r3);
    return {std::move(c), std::move(report)};
}

} // namespace strata
