#include "voskit/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace voskit {

namespace {

// Scores travel as percentages rounded to two decimals so serialized output
// is reproducible byte-for-byte.
double percent(double fraction) {
    return std::round(fraction * 10000.0) / 100.0;
}

nlohmann::ordered_json percent_or_null(const std::optional<double>& fraction) {
    if (!fraction) return nullptr;
    return percent(*fraction);
}

std::optional<double> percent_opt(const std::optional<double>& fraction) {
    if (!fraction) return std::nullopt;
    return percent(*fraction);
}

}  // namespace

std::string report_to_json(const EvaluationReport& report) {
    nlohmann::ordered_json doc;
    nlohmann::ordered_json agg;
    agg["rows"] = report.aggregate.row_count;
    agg["j"] = percent(report.aggregate.j);
    agg["f"] = percent(report.aggregate.f);
    agg["jf"] = percent(report.aggregate.jf());
    agg["f_adaptive"] = percent(report.aggregate.f_adaptive);
    agg["jf_adaptive"] = percent(report.aggregate.jf_adaptive());
    agg["jf_adaptive_disappear"] = percent_or_null(report.aggregate.jf_adaptive_disappear);
    agg["jf_adaptive_reappear"] = percent_or_null(report.aggregate.jf_adaptive_reappear);
    doc["aggregate"] = std::move(agg);

    doc["sequences"] = nlohmann::ordered_json::array();
    for (const SequenceResult& seq : report.sequences) {
        nlohmann::ordered_json s;
        s["name"] = seq.name;
        s["objects"] = nlohmann::ordered_json::array();
        for (const ObjectReport& obj : seq.objects) {
            nlohmann::ordered_json o;
            o["id"] = obj.object_id;
            o["evaluated_frames"] = obj.evaluated_frames;
            o["j"] = percent(obj.j);
            o["f"] = percent(obj.f);
            o["jf"] = percent(obj.jf());
            o["f_adaptive"] = percent(obj.f_adaptive);
            o["jf_adaptive"] = percent(obj.jf_adaptive());
            o["disappear_frames"] = obj.disappear_frames;
            o["reappear_frames"] = obj.reappear_frames;
            o["jf_adaptive_disappear"] = percent_or_null(obj.jf_adaptive_disappear);
            o["jf_adaptive_reappear"] = percent_or_null(obj.jf_adaptive_reappear);
            o["j_disappear"] = percent_or_null(obj.j_disappear);
            o["j_reappear"] = percent_or_null(obj.j_reappear);
            s["objects"].push_back(std::move(o));
        }
        s["warnings"] = seq.warnings;
        doc["sequences"].push_back(std::move(s));
    }
    return doc.dump(2) + "\n";
}

std::string render_percent_table(const std::vector<PercentRow>& rows, const PercentRow& aggregate,
                                 const std::vector<std::string>& warnings) {
    std::size_t name_width = std::string("sequence").size();
    for (const PercentRow& row : rows) name_width = std::max(name_width, row.name.size());
    name_width = std::max(name_width, aggregate.name.size());

    std::ostringstream out;
    const int col = 9;
    out << std::left << std::setw(static_cast<int>(name_width)) << "sequence" << std::right
        << std::setw(4) << "obj";
    for (const char* header : {"J", "F", "J&F", "F^", "J&F^", "J&F^_d", "J&F^_r"})
        out << std::setw(col) << header;
    out << '\n';

    const auto emit = [&](const PercentRow& row) {
        out << std::left << std::setw(static_cast<int>(name_width)) << row.name << std::right
            << std::setw(4) << row.id;
        for (const std::optional<double>& score : row.scores) {
            if (score) {
                char buf[32];
                std::snprintf(buf, sizeof(buf), "%.2f", *score);
                out << std::setw(col) << buf;
            } else {
                out << std::setw(col) << "n/a";
            }
        }
        out << '\n';
    };
    for (const PercentRow& row : rows) emit(row);
    emit(aggregate);

    bool any_warning = false;
    for (const std::string& w : warnings) {
        if (!any_warning) out << '\n';
        any_warning = true;
        out << "warning: " << w << '\n';
    }
    return out.str();
}

std::string render_table(const EvaluationReport& report) {
    std::vector<PercentRow> rows;
    for (const SequenceResult& seq : report.sequences)
        for (const ObjectReport& obj : seq.objects)
            rows.push_back(PercentRow{seq.name,
                                      obj.object_id,
                                      {percent(obj.j), percent(obj.f), percent(obj.jf()),
                                       percent(obj.f_adaptive), percent(obj.jf_adaptive()),
                                       percent_opt(obj.jf_adaptive_disappear),
                                       percent_opt(obj.jf_adaptive_reappear)}});
    const AggregateReport& agg = report.aggregate;
    PercentRow total{"aggregate",
                     agg.row_count,
                     {percent(agg.j), percent(agg.f), percent(agg.jf()), percent(agg.f_adaptive),
                      percent(agg.jf_adaptive()), percent_opt(agg.jf_adaptive_disappear),
                      percent_opt(agg.jf_adaptive_reappear)}};
    std::vector<std::string> warnings;
    for (const SequenceResult& seq : report.sequences)
        warnings.insert(warnings.end(), seq.warnings.begin(), seq.warnings.end());
    return render_percent_table(rows, total, warnings);
}

void write_report_files(const EvaluationReport& report, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const auto write_text = [&](const char* name, const std::string& text) {
        const std::filesystem::path path = dir / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
        out << text;
        if (!out) throw std::runtime_error("failed writing " + path.string());
    };
    write_text("report.json", report_to_json(report));
    write_text("report.txt", render_table(report));
}

}  // namespace voskit
