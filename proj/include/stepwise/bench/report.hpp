#pragma once

#include "stepwise/types.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace stepwise::bench {

struct TaskScore {
    std::string task_id;
    TaskKind kind = TaskKind::Short;
    std::optional<double> best;  // empty when the task produced no result
};

struct ReportSummary {
    std::vector<TaskScore> rows;
    std::optional<double> short_mean;  // S row
    std::optional<double> long_mean;   // L row
    std::optional<double> all_mean;
    std::vector<std::string> missing;  // task ids without a score
};

// Half-up rounding to one decimal.
double round_one_decimal(double value);

// Means of the per-task bests over present tasks, rounded to one decimal.
ReportSummary summarize(std::vector<TaskScore> rows);

std::string format_table(const ReportSummary& summary);
std::string format_csv(const ReportSummary& summary);

// {"tasks":[{"task_id","kind","best_score"}...]}; a null or absent
// best_score marks a missing result. Rows sharing a task id (several
// variations) are averaged.
std::vector<TaskScore> parse_results(const std::string& text);
std::vector<TaskScore> read_results(const std::filesystem::path& path);

// (step, cumulative score) rows with a header line.
std::string curve_tsv(const TrialTrace& trace);

// Heuristic: the episode completed the task on the first step that raised
// its score, so no earlier subgoal led up to it.
bool suspected_shortcut(const TrialTrace& trace);

}  // namespace stepwise::bench
