#include "strata/report.hpp"

#include "strata/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <tuple>
#include <utility>

namespace strata {

ReportFormat parse_report_format(std::string_view text) {
    if (text == "csv") return ReportFormat::csv;
    if (text == "markdown" || text == "md") return ReportFormat::markdown;
    throw ConfigError("unknown report format '" + std::string(text) + "'");
}

std::string format_percent(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f%%", fraction * 100.0);
    return buf;
}

namespace {

std::string strategy_title(Strategy s) {
    switch (s) {
    case Strategy::random: return "Random";
    case Strategy::stratified: return "Stratified";
    case Strategy::balanced: return "Balanced";
    }
    return "Random";
}

template <typename T>
void add_unique(std::vector<T>& v, const T& x) {
    if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
}

std::string markdown(const ExperimentReport& report) {
    // Blocks keep first-appearance order of (dataset, label).
    std::vector<std::pair<std::string, std::string>> blocks;
    for (const auto& c : report.cells) add_unique(blocks, std::pair{c.dataset, c.label});

    std::string out;
    for (const auto& [dataset, label] : blocks) {
        std::vector<std::pair<Strategy, ClassifierKind>> columns;
        std::vector<std::size_t> sizes;
        std::map<std::tuple<std::size_t, Strategy, ClassifierKind>, const EvalCell*> cells;
        for (const auto& c : report.cells) {
            if (c.dataset != dataset || c.label != label) continue;
            add_unique(columns, std::pair{c.strategy, c.classifier});
            add_unique(sizes, c.sample_size);
            cells[{c.sample_size, c.strategy, c.classifier}] = &c;
        }
        std::sort(sizes.begin(), sizes.end());

        if (!out.empty()) out += '\n';
        out += "### " + (dataset.empty() ? std::string("dataset") : dataset) + " / " + label + "\n\n";
        out += "| Sample Size |";
        for (const auto& [s, k] : columns) out += " " + strategy_title(s) + " " + std::string(short_name(k)) + " |";
        out += "\n|---:|";
        for (std::size_t i = 0; i < columns.size(); ++i) out += "---:|";
        out += '\n';

        std::vector<std::string> notes;
        for (std::size_t size : sizes) {
            out += "| " + std::to_string(size) + " |";
            for (const auto& [s, k] : columns) {
                auto it = cells.find({size, s, k});
                if (it == cells.end()) {
                    out += " |";
                } else if (it->second->status == CellStatus::ok) {
                    out += " " + format_percent(it->second->best) + " |";
                } else {
                    out += " — |";
                    notes.push_back(strategy_title(s) + " " + std::string(short_name(k)) + " at " +
                                    std::to_string(size) + " (" + std::string(to_string(it->second->status)) +
                                    "): " + it->second->reason);
                }
            }
            out += '\n';
        }
        if (!notes.empty()) {
            out += "\nNotes:\n\n";
            for (const auto& n : notes) out += "- " + n + "\n";
        }
    }
    return out;
}

} // namespace

std::string emit_report(const ExperimentReport& report, ReportFormat format) {
    if (report.cells.empty()) throw ReportError("cannot emit an empty report");
    return format == ReportFormat::csv ? report.results_csv() : markdown(report);
}

} // namespace strata
