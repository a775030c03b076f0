#include "properties.hpp"

#include "stepwise/agent/trace_io.hpp"
#include "stepwise/memory/memory.hpp"

#include <gtest/gtest.h>

namespace stepwise::testing {
namespace {

std::string listing(const Sweep& s) {
    std::string out;
    for (const auto& v : s.violations) out += v + "\n";
    return out;
}

TEST(Closure, EveryFixtureReplaysFromItsJournal) {
    const Sweep s = closure_sweep();
    EXPECT_TRUE(s.ok()) << listing(s);
    EXPECT_EQ(s.cases, static_cast<int>(fixture_corpus().size()));
}

TEST(Determinism, FixturesAreBitIdenticalAcrossRuns) {
    for (const auto& f : fixture_corpus()) {
        const auto a = run_fixture(f);
        const auto b = run_fixture(f);
        EXPECT_EQ(a.journal.to_jsonl(), b.journal.to_jsonl()) << f.name;
        ASSERT_EQ(a.result.attempts.size(), b.result.attempts.size());
        for (std::size_t k = 0; k < a.result.attempts.size(); ++k) {
            EXPECT_EQ(agent::serialize_trace(a.result.attempts[k].trace),
                      agent::serialize_trace(b.result.attempts[k].trace))
                << f.name;
        }
    }
}

TEST(RoleIsolation, FixtureCorpus) {
    const Sweep s = isolation_sweep();
    EXPECT_TRUE(s.ok()) << listing(s);
    EXPECT_GT(s.counters.at("uncited_insight_checks"), 0);
    EXPECT_GT(s.counters.at("positive_insight_checks"), 0);
    EXPECT_GT(s.counters.at("executor_prompts_with_strategy_in_memory"), 0);
}

// Random runs with random citations, to reach prompt shapes the fixtures do not.
TEST(RoleIsolation, RandomRuns) {
    std::mt19937_64 rng(0x1501);
    Sweep sweep;
    const auto& world = *library().get("temp-measure");
    for (int r = 0; r < 40; ++r) {
        RunConfig config;
        config.attempts = 2;
        config.planner_off = r % 4 == 0;
        memory::MemoryStore seed = random_store(rng);
        llm::PromptJournal journal;
        sim::Simulator env(library());
        const auto result =
            agent::run_task(world.task_spec(0), env,
                            llm::BackendSet::uniform(std::make_shared<RandomBackend>(rng(), world)), config,
                            &journal, seed);
        FixtureRun run{result, journal, seed};
        check_role_isolation(journal, memory_inputs(run), config.planner_off, sweep);
    }
    EXPECT_TRUE(sweep.ok()) << listing(sweep);
    EXPECT_GT(sweep.counters["uncited_insight_checks"], 0);
}

}  // namespace
}  // namespace stepwise::testing
