#pragma once

#include "stepwise/agent/orchestrator.hpp"
#include "stepwise/llm/backend.hpp"
#include "stepwise/memory/memory.hpp"
#include "stepwise/sim/simulator.hpp"

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace stepwise::testing {

std::filesystem::path data_path(const std::string& relative);

// Bundled worlds, loaded once per process.
const sim::TaskLibrary& library();

struct Fixture {
    std::string name;
    std::string script;       // under data/scripts
    std::string memory_seed;  // under data/memory, may be empty
    int attempts = 1;
    bool planner_off = false;
};

// golden, planner-off, rule-blocking, five-attempts
const std::vector<Fixture>& fixture_corpus();
const Fixture& fixture(const std::string& name);

struct FixtureRun {
    agent::TaskResult result;
    llm::PromptJournal journal;
    memory::MemoryStore seed;
};

RunConfig fixture_config(const Fixture& f);

// Runs a fixture on temp-measure variation 0 with its scripted backends.
FixtureRun run_fixture(const Fixture& f);

// Runs the same fixture with responses served from `journal`.
agent::TaskResult replay_fixture(const Fixture& f, const llm::PromptJournal& journal);

// Memory each attempt started from: seed, then each attempt's memory_after.
std::vector<memory::MemoryStore> memory_inputs(const FixtureRun& run);

// Environment that plays back fixed outcomes, then repeats `tail` forever.
class CannedEnvironment final : public Environment {
public:
    CannedEnvironment(std::vector<StepOutcome> outcomes, StepOutcome tail);

    std::string reset(const std::string& task_id, std::int64_t variation) override;
    StepOutcome step(const ActionCommand& action) override;

    int steps() const { return steps_; }
    int resets() const { return resets_; }
    const std::vector<ActionCommand>& actions() const { return actions_; }

private:
    std::vector<StepOutcome> outcomes_;
    StepOutcome tail_;
    int steps_ = 0;
    int resets_ = 0;
    std::vector<ActionCommand> actions_;
};

// Seeded backend producing a mix of well-formed and malformed replies for
// every role. Action replies draw from the world's objects and rooms.
class RandomBackend final : public llm::CompletionBackend {
public:
    RandomBackend(std::uint64_t seed, const sim::WorldDefinition& world);

    std::string complete(const llm::CompletionRequest& request) override;

private:
    std::string action();
    std::string object();

    std::mt19937_64 rng_;
    std::vector<std::string> objects_;
    std::vector<std::string> rooms_;
};

memory::Insight make_insight(int id, std::string x, std::string y, memory::Polarity p,
                             memory::Confidence c = memory::Confidence::May, int source = 0);

// Random store for the memory law suites. Phrases come from a small pool so
// normalized collisions are common.
memory::MemoryStore random_store(std::mt19937_64& rng, const std::string& task_id = "temp-measure");
std::vector<memory::Insight> random_insights(std::mt19937_64& rng, int max_count, int max_attempt);

}  // namespace stepwise::testing
