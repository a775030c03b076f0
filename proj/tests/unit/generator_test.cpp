#include "fixtures.hpp"

#include "stepwise/actions.hpp"
#include "stepwise/agent/orchestrator.hpp"
#include "stepwise/errors.hpp"
#include "stepwise/memory/generator.hpp"

#include <gtest/gtest.h>

namespace stepwise::memory {
namespace {

TaskSpec task() { return stepwise::testing::library().get("temp-measure")->task_spec(0); }

TrialTrace trace_with(const std::vector<std::pair<std::string, int>>& steps, bool last_terminal) {
    TrialTrace t;
    t.task_id = "temp-measure";
    t.attempt = 1;
    t.budget = 37;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const bool terminal = last_terminal && i + 1 == steps.size();
        t = agent::record_step(t, {"obs " + std::to_string(i + 1), steps[i].second, terminal, false},
                               parse_action_text(steps[i].first), "");
    }
    if (!t.ended()) t.ended_by = EndReason::BudgetExhausted;
    return t;
}

TrialTrace scoring_trace() {
    return trace_with({{"go to kitchen", 0}, {"focus on thermometer", 20}, {"look around", 20},
                       {"focus on unknown substance b", 40}, {"focus on red box", 90}},
                      true);
}

struct Harness {
    explicit Harness(const std::string& script)
        : client(llm::BackendSet::uniform(
                     std::make_shared<llm::ScriptedBackend>(llm::ScriptedScript::parse(script))),
                 &journal) {}

    llm::PromptJournal journal;
    llm::CompletionClient client;
};

TEST(ParseReflection, InsightLinesAndNone) {
    const auto two = parse_reflection(
        "INSIGHT: going to the kitchen is necessary for finding the thermometer\n"
        "INSIGHT: opening the fridge does not contribute to the task.");
    ASSERT_EQ(two.size(), 2u);
    EXPECT_EQ(two[1].polarity, Polarity::MayNotContribute);
    EXPECT_TRUE(parse_reflection("INSIGHTS: none").empty());
    EXPECT_THROW(parse_reflection("I learned a lot"), ParseError);
    EXPECT_THROW(parse_reflection("INSIGHT: the fridge is cold"), ParseError);
}

TEST(ParseEssential, ListsAndNone) {
    EXPECT_EQ(parse_essential("ESSENTIAL: [3, 5]"), (std::vector<int>{3, 5}));
    EXPECT_TRUE(parse_essential("ESSENTIAL: none").empty());
}

TEST(ParseMilestones, StepRanges) {
    const auto m = parse_milestones("MILESTONE: get there [steps: 1, 2-4]\nMILESTONE: finish");
    ASSERT_EQ(m.size(), 2u);
    EXPECT_EQ(m[0].text, "get there");
    EXPECT_EQ(m[0].steps, (std::vector<int>{1, 2, 3, 4}));
    EXPECT_TRUE(m[1].steps.empty());
}

TEST(RewardedSteps, StrictIncreasesOnly) {
    EXPECT_EQ(rewarded_steps(scoring_trace()), (std::vector<int>{2, 4, 5}));
}

TEST(RenderTrace, MarksRetainedSteps) {
    const std::string text = render_trace(scoring_trace(), {2});
    EXPECT_NE(text.find("2.* > focus on thermometer"), std::string::npos) << text;
    EXPECT_NE(text.find("1. > go to kitchen"), std::string::npos) << text;
}

TEST(GenerateMemory, TwoInsightsAndThreeMilestones) {
    Harness h(
        "@memory\n"
        "INSIGHT: going to the kitchen is necessary for finding the thermometer\n"
        "INSIGHT: focusing on the red box may contribute to the task\n"
        "@memory\nESSENTIAL: [1]\n"
        "@memory\n"
        "MILESTONE: go to the kitchen and focus on the thermometer [steps: 1-2]\n"
        "MILESTONE: focus on unknown substance B [steps: 4]\n"
        "MILESTONE: focus on the red box [steps: 5]\n");
    MemoryStore prior;
    prior.task_id = "temp-measure";
    const auto report = MemoryGenerator(h.client).generate(task(), prior, scoring_trace(), 90);
    EXPECT_EQ(report.store.insights.size(), 2u);
    EXPECT_EQ(report.store.strategy.milestones.size(), 3u);
    EXPECT_EQ(report.store.attempt_count, 1);
    EXPECT_EQ(report.store.strategy.source_attempt, 1);
    EXPECT_EQ(report.retained_steps, (std::vector<int>{1, 2, 4, 5}));
    EXPECT_FALSE(report.strategy_fallback);
    for (const auto& i : report.store.insights) EXPECT_EQ(i.source_attempt, 1);
}

TEST(GenerateMemory, NoRewardKeepsInsightsAndSkipsStrategyPrompts) {
    Harness h("@memory\nINSIGHT: opening the fridge does not contribute to the task\n");
    MemoryStore prior;
    prior.task_id = "temp-measure";
    prior.strategy.milestones = {{"earlier plan", {1}}};
    const auto t = trace_with({{"open fridge", 0}, {"look around", 0}}, false);
    const auto report = MemoryGenerator(h.client).generate(task(), prior, t, 0);
    EXPECT_EQ(report.store.insights.size(), 1u);
    EXPECT_EQ(report.store.strategy, prior.strategy);
    EXPECT_EQ(h.journal.entries().size(), 1u);
}

TEST(GenerateMemory, RepeatedInsightDoesNotGrowTheStore) {
    Harness h("@memory\nINSIGHT: going to the kitchen is necessary for finding the thermometer\n");
    MemoryStore prior;
    prior.task_id = "temp-measure";
    prior.insights = {stepwise::testing::make_insight(1, "going to the kitchen", "finding the thermometer",
                                                      Polarity::Necessary, Confidence::Necessary, 0)};
    const auto t = trace_with({{"look around", 0}}, false);
    const auto report = MemoryGenerator(h.client).generate(task(), prior, t, 0);
    EXPECT_EQ(report.store.insights.size(), 1u);
    EXPECT_EQ(report.store.insights[0].source_attempt, 1);
}

TEST(GenerateMemory, MalformedReflectionKeepsThePrior) {
    Harness h("@memory\nno idea\n");
    MemoryStore prior;
    prior.task_id = "temp-measure";
    prior.insights = {stepwise::testing::make_insight(1, "x", "y", Polarity::MayContribute)};
    const auto report = MemoryGenerator(h.client).generate(task(), prior, scoring_trace(), 90);
    EXPECT_TRUE(report.reflection_malformed);
    EXPECT_EQ(report.store, prior);
}

TEST(GenerateMemory, UnusableMilestonesFallBackToRewardedActions) {
    Harness h("@memory\nINSIGHTS: none\n@memory\nESSENTIAL: none\n@memory\nMILESTONE: something [steps: 3]\n");
    MemoryStore prior;
    prior.task_id = "temp-measure";
    const auto report = MemoryGenerator(h.client).generate(task(), prior, scoring_trace(), 90);
    EXPECT_TRUE(report.strategy_fallback);
    ASSERT_EQ(report.store.strategy.milestones.size(), 3u);
    EXPECT_EQ(report.store.strategy.milestones[0].text, "focus on thermometer");
    EXPECT_EQ(report.store.strategy.milestones[0].steps, std::vector<int>{2});
}

TEST(GenerateMemory, NeedsAnEndedTrace) {
    Harness h("@memory\nINSIGHTS: none\n");
    TrialTrace running;
    running.task_id = "temp-measure";
    running.budget = 37;
    EXPECT_THROW(MemoryGenerator(h.client).generate(task(), {}, running, 0), ContractViolation);
}

}  // namespace
}  // namespace stepwise::memory
