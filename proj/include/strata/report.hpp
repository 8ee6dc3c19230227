#pragma once

#include "strata/evaluator.hpp"

#include <string>
#include <string_view>

namespace strata {

enum class ReportFormat { csv, markdown };

ReportFormat parse_report_format(std::string_view text);

/// Best accuracy as a percentage with two decimals, e.g. "84.72%".
std::string format_percent(double fraction);

/// Markdown: one table per (dataset, label), sample sizes as rows and one
/// column per strategy and classifier in report order. Cells that did not
/// run show "—" and their reasons are listed under the table.
/// CSV: the flat per-iteration results.
/// Throws ReportError on an empty report.
std::string emit_report(const ExperimentReport& report, ReportFormat format);

} // namespace strata
