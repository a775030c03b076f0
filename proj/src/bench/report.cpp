#include "stepwise/bench/report.hpp"

#include "stepwise/errors.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace stepwise::bench {

using nlohmann::json;

namespace {

std::string fmt1(std::optional<double> v) {
    if (!v) return "-";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", *v);
    return buf;
}

std::optional<double> mean_of(const std::vector<TaskScore>& rows, std::optional<TaskKind> kind) {
    double sum = 0;
    int n = 0;
    for (const auto& r : rows) {
        if (!r.best || (kind && r.kind != *kind)) continue;
        sum += *r.best;
        ++n;
    }
    if (n == 0) return std::nullopt;
    return round_one_decimal(sum / n);
}

}  // namespace

double round_one_decimal(double value) { return std::floor(value * 10.0 + 0.5 + 1e-9) / 10.0; }

ReportSummary summarize(std::vector<TaskScore> rows) {
    ReportSummary s;
    s.rows = std::move(rows);
    for (const auto& r : s.rows) {
        if (!r.best) s.missing.push_back(r.task_id);
    }
    s.short_mean = mean_of(s.rows, TaskKind::Short);
    s.long_mean = mean_of(s.rows, TaskKind::Long);
    s.all_mean = mean_of(s.rows, std::nullopt);
    return s;
}

std::string format_table(const ReportSummary& summary) {
    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof line, "%-32s %-4s %8s\n", "task", "kind", "best");
    out << line;
    for (const auto& r : summary.rows) {
        std::snprintf(line, sizeof line, "%-32s %-4s %8s\n", r.task_id.c_str(), r.kind == TaskKind::Short ? "S" : "L",
                      fmt1(r.best).c_str());
        out << line;
    }
    out << std::string(46, '-') << '\n';
    for (const auto& [label, value] : {std::pair{"S", summary.short_mean}, std::pair{"L", summary.long_mean},
                                       std::pair{"All", summary.all_mean}}) {
        std::snprintf(line, sizeof line, "%-32s %-4s %8s\n", label, "", fmt1(value).c_str());
        out << line;
    }
    if (!summary.missing.empty()) {
        out << "missing results:";
        for (const auto& m : summary.missing) out << ' ' << m;
        out << '\n';
    }
    return out.str();
}

std::string format_csv(const ReportSummary& summary) {
    std::ostringstream out;
    out << "task,kind,best\n";
    for (const auto& r : summary.rows) {
        out << r.task_id << ',' << (r.kind == TaskKind::Short ? "S" : "L") << ',' << (r.best ? fmt1(r.best) : "")
            << '\n';
    }
    out << "S,," << (summary.short_mean ? fmt1(summary.short_mean) : "") << '\n';
    out << "L,," << (summary.long_mean ? fmt1(summary.long_mean) : "") << '\n';
    out << "All,," << (summary.all_mean ? fmt1(summary.all_mean) : "") << '\n';
    return out.str();
}

std::vector<TaskScore> parse_results(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("results file is not valid JSON: ") + e.what());
    }
    std::vector<TaskScore> rows;
    std::map<std::string, std::pair<std::size_t, int>> seen;  // row index, variations averaged
    try {
        for (const auto& t : doc.at("tasks")) {
            TaskScore s;
            s.task_id = t.at("task_id").get<std::string>();
            s.kind = task_kind_from_string(t.at("kind").get<std::string>());
            if (t.contains("best_score") && !t.at("best_score").is_null()) s.best = t.at("best_score").get<double>();
            const auto it = seen.find(s.task_id);
            if (it == seen.end()) {
                seen[s.task_id] = {rows.size(), s.best ? 1 : 0};
                rows.push_back(std::move(s));
                continue;
            }
            auto& [index, count] = it->second;
            TaskScore& held = rows[index];
            if (s.best) {
                held.best = ((held.best.value_or(0.0) * count) + *s.best) / (count + 1);
                ++count;
            }
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed results file: ") + e.what());
    }
    return rows;
}

std::vector<TaskScore> read_results(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open results " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_results(buf.str());
}

std::string curve_tsv(const TrialTrace& trace) {
    std::string out = "step\tscore\n0\t0\n";
    for (const auto& s : trace.steps) out += std::to_string(s.index) + "\t" + std::to_string(s.reward) + "\n";
    return out;
}

bool suspected_shortcut(const TrialTrace& trace) {
    if (trace.ended_by != EndReason::TaskComplete) return false;
    int previous = 0;
    for (const auto& s : trace.steps) {
        if (s.reward > previous) return s.terminal;
        previous = std::max(previous, s.reward);
    }
    return false;
}

}  // namespace stepwise::bench
