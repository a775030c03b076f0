#pragma once

#include "fixtures.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace stepwise::testing {

// Collected findings of one property sweep. `cases` counts generated inputs;
// `violations` holds one line per failed check (capped).
struct Sweep {
    int cases = 0;
    std::vector<std::string> violations;
    std::map<std::string, int> counters;  // coverage tallies, e.g. runs that hit the budget

    bool ok() const { return violations.empty(); }
    void fail(std::string what);
};

// Random action text over the world's objects and rooms; always parses.
std::string random_action_text(std::mt19937_64& rng, const sim::WorldDefinition& world);

// Independent episode score: highest score before the first fatal step,
// else the final score, never below zero.
int oracle_episode_score(const std::vector<StepOutcome>& outcomes);

// Randomized orchestrated runs over the bundled worlds with RandomBackend
// replies and random configurations. Checks the step budget per trial at
// the environment and in the trace.
Sweep budget_sweep(int runs, std::uint64_t seed);

// Random action sequences on the simulator. Checks score monotonicity,
// the fatal penalty and the episode score against the oracle.
Sweep score_sweep(int sequences, std::uint64_t seed);

// Merge idempotence, dedup by normalized pair, the polarity rule,
// negative-rule projection and persistence round trips.
Sweep memory_sweep(int stores, std::uint64_t seed);

// Executor prompts never show strategy text or insights the current
// directive did not cite; Evaluator prompts never show positive insights.
// `inputs` is the memory each attempt started from.
void check_role_isolation(const llm::PromptJournal& journal, const std::vector<memory::MemoryStore>& inputs,
                          bool planner_off, Sweep& sweep);

// Role isolation over every fixture in the corpus.
Sweep isolation_sweep();

// Each fixture replayed from its own journal reproduces its traces and memory.
Sweep closure_sweep();

}  // namespace stepwise::testing
