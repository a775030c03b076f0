#include "stepwise/bench/commands.hpp"
#include "stepwise/bench/report.hpp"
#include "stepwise/errors.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

namespace stepwise::bench {
namespace {

// Per-task best scores reported for the agent in the comparison table.
const std::vector<double> kShort{63.0, 62.7, 100, 100, 61.0, 100, 100, 100, 32.2};
const std::vector<double> kLong{21.5, 50.9, 71.5, 14.0, 46.5, 80.0, 73.3, 84.2, 51.8};

std::vector<TaskScore> table_rows() {
    std::vector<TaskScore> rows;
    for (std::size_t i = 0; i < kShort.size(); ++i) rows.push_back({"s" + std::to_string(i), TaskKind::Short, kShort[i]});
    for (std::size_t i = 0; i < kLong.size(); ++i) rows.push_back({"l" + std::to_string(i), TaskKind::Long, kLong[i]});
    return rows;
}

// Independent mean, rounded half-up in decimal via integer tenths.
double oracle_mean(const std::vector<double>& v) {
    long tenths = 0;
    for (double x : v) tenths += std::lround(x * 10);
    const long n = static_cast<long>(v.size());
    return static_cast<double>((2 * tenths + n) / (2 * n)) / 10.0;
}

TEST(Summarize, ReproducesTheTableAggregates) {
    const auto s = summarize(table_rows());
    std::vector<double> all = kShort;
    all.insert(all.end(), kLong.begin(), kLong.end());
    EXPECT_DOUBLE_EQ(*s.short_mean, oracle_mean(kShort));
    EXPECT_DOUBLE_EQ(*s.long_mean, oracle_mean(kLong));
    EXPECT_DOUBLE_EQ(*s.all_mean, oracle_mean(all));
    EXPECT_DOUBLE_EQ(*s.short_mean, 79.9);
    EXPECT_DOUBLE_EQ(*s.long_mean, 54.9);
    EXPECT_DOUBLE_EQ(*s.all_mean, 67.4);
}

TEST(Summarize, SingleHundred) {
    const auto s = summarize({{"t", TaskKind::Short, 100.0}});
    EXPECT_DOUBLE_EQ(*s.short_mean, 100);
    EXPECT_DOUBLE_EQ(*s.all_mean, 100);
    EXPECT_FALSE(s.long_mean.has_value());
}

TEST(Summarize, EighteenZeros) {
    auto rows = table_rows();
    for (auto& r : rows) r.best = 0.0;
    const auto s = summarize(rows);
    EXPECT_DOUBLE_EQ(*s.short_mean, 0);
    EXPECT_DOUBLE_EQ(*s.long_mean, 0);
    EXPECT_DOUBLE_EQ(*s.all_mean, 0);
}

TEST(Summarize, MissingTasksAreListedAndSkipped) {
    const auto s = summarize({{"a", TaskKind::Short, 50.0}, {"b", TaskKind::Short, std::nullopt}});
    EXPECT_EQ(s.missing, std::vector<std::string>{"b"});
    EXPECT_DOUBLE_EQ(*s.short_mean, 50);
}

TEST(RoundOneDecimal, HalfUp) {
    EXPECT_DOUBLE_EQ(round_one_decimal(79.85), 79.9);
    EXPECT_DOUBLE_EQ(round_one_decimal(54.94), 54.9);
    EXPECT_DOUBLE_EQ(round_one_decimal(0.05), 0.1);
}

TEST(Format, CsvRows) {
    const std::string csv = format_csv(summarize(table_rows()));
    EXPECT_NE(csv.find("\nS,,79.9\n"), std::string::npos) << csv;
    EXPECT_NE(csv.find("\nL,,54.9\n"), std::string::npos) << csv;
    EXPECT_NE(csv.find("\nAll,,67.4\n"), std::string::npos) << csv;
    const std::string table = format_table(summarize(table_rows()));
    EXPECT_NE(table.find("67.4"), std::string::npos) << table;
}

TEST(ParseResults, AveragesVariationsAndReadsNulls) {
    const auto rows = parse_results(R"({"tasks":[
        {"task_id":"a","kind":"S","best_score":40},
        {"task_id":"a","kind":"S","best_score":60},
        {"task_id":"b","kind":"L","best_score":null}]})");
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_DOUBLE_EQ(*rows[0].best, 50);
    EXPECT_FALSE(rows[1].best.has_value());
    EXPECT_EQ(rows[1].kind, TaskKind::Long);
    EXPECT_THROW(parse_results("[]"), Error);
}

TEST(CurveTsv, OneRowPerStep) {
    TrialTrace t;
    for (int s : {0, 20}) {
        StepRecord r;
        r.reward = s;
        r.index = static_cast<int>(t.steps.size()) + 1;
        t.steps.push_back(r);
    }
    EXPECT_EQ(curve_tsv(t), "step\tscore\n0\t0\n1\t0\n2\t20\n");
}

TEST(SuspectedShortcut, FlagsAFirstRaiseThatEndsTheTask) {
    TrialTrace t;
    t.ended_by = EndReason::TaskComplete;
    StepRecord a;
    a.reward = 0;
    StepRecord b;
    b.reward = 100;
    b.terminal = true;
    t.steps = {a, b};
    EXPECT_TRUE(suspected_shortcut(t));
    StepRecord mid;
    mid.reward = 20;
    t.steps = {a, mid, b};
    EXPECT_FALSE(suspected_shortcut(t));
}

TEST(CmdReport, PrintsTheTableAndWritesFiles) {
    const auto dir = std::filesystem::temp_directory_path() / "stepwise_report_test";
    std::filesystem::create_directories(dir);
    nlohmann::json doc;
    for (const auto& r : table_rows()) {
        doc["tasks"].push_back({{"task_id", r.task_id}, {"kind", r.kind == TaskKind::Short ? "S" : "L"},
                                {"best_score", *r.best}});
    }
    std::ofstream(dir / "results.json") << doc.dump();
    std::ostringstream out;
    std::ostringstream err;
    EXPECT_EQ(cmd_report({dir}, ReportFormat::Csv, dir / "report", out, err), 0);
    EXPECT_NE(out.str().find("\nAll,,67.4\n"), std::string::npos) << out.str();
    EXPECT_TRUE(std::filesystem::exists(dir / "report" / "report.csv"));
    std::filesystem::remove_all(dir);
}

TEST(CmdReport, MissingInputFails) {
    std::ostringstream out;
    std::ostringstream err;
    EXPECT_NE(cmd_report({"/nonexistent/results.json"}, ReportFormat::Table, std::nullopt, out, err), 0);
}

}  // namespace
}  // namespace stepwise::bench
