#ifndef VOSKIT_REPORT_HPP
#define VOSKIT_REPORT_HPP

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "voskit/evaluate.hpp"

namespace voskit {

/// One table line, already in percent: row title, object id (or row count for
/// the aggregate line), and the seven score columns
/// J, F, J&F, F^, J&F^, J&F^_d, J&F^_r. A missing value renders as "n/a".
struct PercentRow {
    std::string name;
    int id = 0;
    std::array<std::optional<double>, 7> scores;
};

/// Shared table layout for both freshly computed reports and re-rendered
/// report.json files, so the two paths can never format differently.
std::string render_percent_table(const std::vector<PercentRow>& rows, const PercentRow& aggregate,
                                 const std::vector<std::string>& warnings);

/// Machine-readable report: aggregate block plus one row per
/// (sequence, object). Scores are percentages rounded to two decimals;
/// undefined subset means are JSON null.
std::string report_to_json(const EvaluationReport& report);

/// Human-readable aligned table with the columns
/// J, F, J&F, F^, J&F^, J&F^_d, J&F^_r (percent, two decimals; "n/a" where a
/// subset mean is undefined), one row per (sequence, object), then the
/// aggregate row. Warnings, if any, follow the table.
std::string render_table(const EvaluationReport& report);

/// Writes report.json and report.txt into `dir` (created if needed).
void write_report_files(const EvaluationReport& report, const std::filesystem::path& dir);

}  // namespace voskit

#endif  // VOSKIT_REPORT_HPP
