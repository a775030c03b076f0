#include "fixtures.hpp"

#include "stepwise/agent/trace_io.hpp"
#include "stepwise/bench/commands.hpp"
#include "stepwise/bench/replay.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

namespace stepwise::bench {
namespace {

using stepwise::testing::library;

const stepwise::testing::FixtureRun& golden() {
    static const auto run = stepwise::testing::run_fixture(stepwise::testing::fixture("golden"));
    return run;
}

const TrialTrace& golden_trace() { return golden().result.attempts.at(0).trace; }

// A seed whose starting room holds different objects than seed 0.
std::int64_t seed_with_thermometer_in_art_studio() {
    sim::Simulator sim(library());
    for (std::int64_t seed = 1; seed < 500; ++seed) {
        sim.reset("temp-measure", seed);
        const auto& w = sim.world();
        if (sim.state().location[w.object_index("thermometer")] == w.room_index("art studio")) return seed;
    }
    return -1;
}

TEST(ReplayTrace, UntouchedGoldenTraceIsValid) {
    const auto r = replay_trace(golden_trace(), library(), &golden().journal);
    EXPECT_TRUE(r.valid) << r.message;
    EXPECT_EQ(r.steps_checked, 14);
}

TEST(ReplayTrace, EditedObservationDivergesAtThatStep) {
    for (int k : {1, 7, 14}) {
        TrialTrace t = golden_trace();
        t.steps[k - 1].observation += " (edited)";
        const auto r = replay_trace(t, library());
        EXPECT_FALSE(r.valid);
        EXPECT_EQ(r.divergence_index, k);
        EXPECT_EQ(r.steps_checked, k - 1);
    }
}

TEST(ReplayTrace, EditedScoreDiverges) {
    TrialTrace t = golden_trace();
    t.steps[3].reward = 25;
    const auto r = replay_trace(t, library());
    EXPECT_EQ(r.divergence_index, 4);
    EXPECT_NE(r.message.find("score differs"), std::string::npos);
}

TEST(ReplayTrace, WrongSeedDivergesAtStepOne) {
    ASSERT_EQ(golden_trace().steps.front().action.text(), "look around");
    const auto seed = seed_with_thermometer_in_art_studio();
    ASSERT_GT(seed, 0);
    const auto r = replay_trace(golden_trace(), library(), nullptr, seed);
    EXPECT_FALSE(r.valid);
    EXPECT_EQ(r.divergence_index, 1);
}

TEST(ReplayTrace, VerdictMustApproveTheSameAction) {
    TrialTrace t = golden_trace();
    std::swap(t.steps[1].verdict_id, t.steps[2].verdict_id);
    const auto r = replay_trace(t, library(), &golden().journal);
    EXPECT_FALSE(r.valid);
    EXPECT_EQ(r.divergence_index, 2);
    EXPECT_NE(r.message.find("different action"), std::string::npos) << r.message;
}

TEST(ReplayTrace, AnnotationsMustBeConsistent) {
    TrialTrace forced = golden_trace();
    forced.steps[0].approval = Approval::ForceExecute;
    EXPECT_EQ(replay_trace(forced, library()).divergence_index, 1);
    TrialTrace ungated = golden_trace();
    ungated.steps[2].approval = Approval::Ungated;
    EXPECT_EQ(replay_trace(ungated, library()).divergence_index, 3);
}

TEST(CmdReplay, ExitStatus) {
    const auto root = std::filesystem::temp_directory_path() / "stepwise_cmd_replay";
    const auto path = agent::trace_path(root, "temp-measure", 0, 1);
    agent::write_trace(golden_trace(), path);
    golden().journal.save((path.parent_path() / "journal.jsonl").string());
    std::ostringstream out;
    std::ostringstream err;
    EXPECT_EQ(cmd_replay(path, std::nullopt, std::nullopt, out, err), 0) << out.str() << err.str();
    EXPECT_NE(out.str().find("valid (14 steps)"), std::string::npos);
    EXPECT_EQ(cmd_replay(path, std::nullopt, seed_with_thermometer_in_art_studio(), out, err), 1);
    EXPECT_EQ(cmd_replay(root / "missing.trace", std::nullopt, std::nullopt, out, err), 2);
    std::filesystem::remove_all(root);
}

}  // namespace
}  // namespace stepwise::bench
