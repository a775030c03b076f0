#include "fixtures.hpp"

#include "stepwise/actions.hpp"
#include "stepwise/env/protocol.hpp"
#include "stepwise/errors.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <functional>
#include <memory>
#include <sstream>

namespace stepwise {
namespace {

using stepwise::testing::library;

TEST(Protocol, EncodeRequests) {
    EXPECT_EQ(nlohmann::json::parse(encode_reset("temp-measure", 3)),
              (nlohmann::json{{"op", "reset"}, {"task_id", "temp-measure"}, {"variation", 3}}));
    EXPECT_EQ(nlohmann::json::parse(encode_step(parse_action_text("go to kitchen"))),
              (nlohmann::json{{"op", "step"}, {"action", "go to kitchen"}}));
    EXPECT_EQ(nlohmann::json::parse(encode_close()), (nlohmann::json{{"op", "close"}}));
}

TEST(Protocol, OutcomeRoundTrip) {
    const StepOutcome o{"line\n\"quoted\"", 40, true, false};
    EXPECT_EQ(decode_outcome(encode_outcome(o)), o);
    EXPECT_EQ(encode_outcome(o).find('\n'), std::string::npos);
}

TEST(Protocol, BadRepliesAreEnvironmentErrors) {
    EXPECT_THROW(decode_outcome(encode_error("boom")), EnvironmentError);
    EXPECT_THROW(decode_outcome("not json"), EnvironmentError);
    EXPECT_THROW(decode_outcome(R"({"observation":"x"})"), EnvironmentError);
    EXPECT_THROW(decode_outcome(R"({"observation":"x","score":-100,"terminal":false,"fatal":true})"),
                 EnvironmentError);
}

TEST(ServeEnvironment, AnswersEveryLineAndSurvivesBadInput) {
    sim::Simulator sim(library());
    std::istringstream in(encode_reset("temp-measure", 0) + "\n" + "garbage\n" +
                          R"({"op":"step","action":"fly to moon"})" + "\n" + encode_step(parse_action_text("wait")) +
                          "\n" + encode_close() + "\n" + encode_step(parse_action_text("wait")) + "\n");
    std::ostringstream out;
    EXPECT_EQ(serve_environment(sim, in, out), 5);
    std::istringstream replies(out.str());
    std::string line;
    std::vector<nlohmann::json> r;
    while (std::getline(replies, line)) r.push_back(nlohmann::json::parse(line));
    ASSERT_EQ(r.size(), 5u);
    EXPECT_FALSE(r[0]["observation"].get<std::string>().empty());
    EXPECT_TRUE(r[1].contains("error"));
    EXPECT_TRUE(r[2].contains("error"));
    EXPECT_EQ(r[3]["observation"], "Time passes.");
    EXPECT_EQ(r[4]["ok"], true);
}

// Shared conformance checks, run against the in-process simulator and the
// same simulator behind the line protocol in a child process.
class Conformance : public ::testing::TestWithParam<std::string> {
protected:
    std::unique_ptr<Environment> make() const {
        if (GetParam() == "in-process") return std::make_unique<sim::Simulator>(library());
        return std::make_unique<SubprocessEnvironment>(std::vector<std::string>{STEPWISE_CLI_PATH, "serve-sim"});
    }
};

TEST_P(Conformance, ResetIsDeterministicAndNonEmpty) {
    auto env = make();
    const std::string a = env->reset("temp-measure", 2);
    const std::string b = env->reset("temp-measure", 2);
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, b);
}

TEST_P(Conformance, LookAroundKeepsTheScore) {
    auto env = make();
    env->reset("temp-measure", 0);
    const auto out = env->step(parse_action_text("look around"));
    EXPECT_FALSE(out.observation.empty());
    EXPECT_EQ(out.score, 0);
    EXPECT_FALSE(out.terminal);
}

TEST_P(Conformance, ThreeStepSmokeIsNonDecreasing) {
    auto env = make();
    env->reset("boil-water", 0);
    int last = 0;
    for (const char* a : {"look around", "go to hallway", "go to kitchen"}) {
        const auto out = env->step(parse_action_text(a));
        EXPECT_FALSE(out.observation.empty()) << a;
        EXPECT_GE(out.score, last) << a;
        last = out.score;
    }
}

TEST_P(Conformance, GoldenPathMatchesTheReference) {
    const auto run = stepwise::testing::run_fixture(stepwise::testing::fixture("golden"));
    auto env = make();
    env->reset("temp-measure", 0);
    for (const auto& s : run.result.attempts[0].trace.steps) {
        const auto out = env->step(s.action);
        EXPECT_EQ(out.observation, s.observation) << s.index;
        EXPECT_EQ(out.score, s.reward) << s.index;
        EXPECT_EQ(out.terminal, s.terminal) << s.index;
    }
}

TEST_P(Conformance, FatalIsAlsoTerminal) {
    auto env = make();
    env->reset("temp-measure", 0);
    env->step(parse_action_text("go to hallway"));
    env->step(parse_action_text("go to living room"));
    const auto out = env->step(parse_action_text("focus on unknown substance B"));
    EXPECT_TRUE(out.fatal);
    EXPECT_TRUE(out.terminal);
}

TEST_P(Conformance, UsableAfterAnErrorOnceReset) {
    auto env = make();
    EXPECT_THROW(env->reset("no-such-task", 0), Error);
    EXPECT_FALSE(env->reset("temp-measure", 0).empty());
    EXPECT_EQ(env->step(parse_action_text("wait")).observation, "Time passes.");
}

INSTANTIATE_TEST_SUITE_P(Environments, Conformance, ::testing::Values("in-process", "subprocess"),
                         [](const auto& info) { return info.param == "in-process" ? "InProcess" : "Subprocess"; });

TEST(SubprocessEnvironment, MalformedRequestGetsAnErrorReply) {
    SubprocessEnvironment env({STEPWISE_CLI_PATH, "serve-sim"});
    const auto reply = nlohmann::json::parse(env.request("this is not json"));
    EXPECT_TRUE(reply.contains("error"));
    EXPECT_FALSE(env.reset("temp-measure", 0).empty());
    env.close();
    env.close();
}

TEST(SubprocessEnvironment, MissingProgramIsAnEnvironmentError) {
    EXPECT_THROW(
        {
            SubprocessEnvironment env({"/nonexistent/stepwise-env"});
            env.reset("temp-measure", 0);
        },
        EnvironmentError);
}

}  // namespace
}  // namespace stepwise
