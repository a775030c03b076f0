#include "fixtures.hpp"

#include "stepwise/actions.hpp"
#include "stepwise/agent/executor.hpp"
#include "stepwise/agent/prompts.hpp"
#include "stepwise/errors.hpp"

#include <gtest/gtest.h>

namespace stepwise::agent {
namespace {

struct Harness {
    explicit Harness(const std::string& script)
        : client(llm::BackendSet::uniform(
                     std::make_shared<llm::ScriptedBackend>(llm::ScriptedScript::parse(script))),
                 &journal),
          executor(client) {}

    std::string prompt(std::size_t i) const { return journal.entries().at(i).prompt; }

    llm::PromptJournal journal;
    llm::CompletionClient client;
    Executor executor;
};

const PlanDirective kDirective{"find the thermometer", {}, PlanOrigin::Proposed, 1, {}};

TEST(ParseActionResponse, ThinkAndAction) {
    const auto p = parse_action_response("THINK: x\nACTION: Open Door");
    EXPECT_EQ(p.rationale, "x");
    EXPECT_EQ(p.action, parse_action_text("open door"));
}

TEST(ParseActionResponse, RationaleIsOptional) {
    const auto p = parse_action_response("ACTION: wait");
    EXPECT_EQ(p.rationale, "");
    EXPECT_EQ(p.action.verb, "wait");
}

TEST(ParseActionResponse, UnknownVerbIsNamed) {
    try {
        parse_action_response("ACTION: fly to moon");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("unknown verb \"fly\""), std::string::npos) << e.what();
    }
}

TEST(ParseActionResponse, MissingActionLine) {
    try {
        parse_action_response("THINK: hmm");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("missing ACTION line"), std::string::npos);
    }
}

TEST(Executor, GeneratesTheScriptedAction) {
    Harness h("@executor\nTHINK: the kitchen likely has one\nACTION: go to kitchen\n");
    const auto p = h.executor.generate_action(kDirective, {}, std::nullopt);
    EXPECT_EQ(p.rationale, "the kitchen likely has one");
    EXPECT_EQ(p.action.verb, "go to");
    EXPECT_EQ(p.action.arguments, std::vector<std::string>{"kitchen"});
    EXPECT_NE(h.prompt(0).find("(no actions yet)"), std::string::npos);
    EXPECT_NE(h.prompt(0).find("find the thermometer"), std::string::npos);
}

TEST(Executor, FeedbackIsRenderedVerbatim) {
    Harness h("@executor\nACTION: look around\n");
    Feedback f{"rejected: focus on substance B violates rule 4", parse_action_text("focus on substance b"), 4};
    h.executor.generate_action(kDirective, {}, f);
    EXPECT_NE(h.prompt(0).find(f.message), std::string::npos);
}

TEST(Executor, PromptListsTheActionTable) {
    Harness h("@executor\nACTION: look around\n");
    h.executor.generate_action(kDirective, {}, std::nullopt);
    EXPECT_NE(h.prompt(0).find(render_action_table()), std::string::npos);
}

TEST(Executor, OneReminderThenFailure) {
    Harness h("@executor x2\nACTION: fly to moon\n");
    EXPECT_THROW(h.executor.generate_action(kDirective, {}, std::nullopt), ParseError);
    ASSERT_EQ(h.journal.entries().size(), 2u);
    EXPECT_NE(h.prompt(1).find("unknown verb"), std::string::npos);
}

TEST(Executor, UnplannedPromptHasNoSubtaskHeading) {
    Harness h("@executor\nACTION: look around\n@executor\nACTION: look around\n");
    const TaskSpec task = stepwise::testing::library().get("temp-measure")->task_spec(0);
    h.executor.generate_unplanned(task, {}, {}, std::nullopt);
    h.executor.generate_action(kDirective, {}, std::nullopt);
    EXPECT_EQ(h.prompt(0).find("Current subtask:"), std::string::npos);
    EXPECT_NE(h.prompt(0).find(task.description), std::string::npos);
    EXPECT_NE(h.prompt(1).find("Current subtask:"), std::string::npos);
}

TEST(RenderHistory, ActionsAndObservationsOnly) {
    StepRecord r;
    r.action = parse_action_text("look around");
    r.observation = "A room.";
    r.rationale = "secret thoughts";
    r.reward = 20;
    const std::vector<StepRecord> steps{r};
    const std::string text = render_history(steps);
    EXPECT_EQ(text, "> look around\nA room.");
    EXPECT_EQ(render_history({}), "(no actions yet)");
}

TEST(LabeledValue, CaseInsensitiveFirstMatch) {
    EXPECT_EQ(labeled_value("x\naction:  go to kitchen \nACTION: wait", "ACTION"), "go to kitchen");
    EXPECT_FALSE(labeled_value("nothing", "ACTION").has_value());
}

}  // namespace
}  // namespace stepwise::agent
