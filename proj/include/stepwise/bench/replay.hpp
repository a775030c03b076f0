#pragma once

#include "stepwise/llm/backend.hpp"
#include "stepwise/sim/simulator.hpp"
#include "stepwise/types.hpp"

#include <optional>
#include <string>

namespace stepwise::bench {

struct ReplayReport {
    bool valid = true;
    std::optional<int> divergence_index;  // first step that failed, 1-based
    std::string message;
    int steps_checked = 0;
};

// Re-runs the recorded actions on a fresh simulator at the recorded seed and
// compares observation, score and flags step by step. Also checks that each
// step carries a release annotation consistent with its verdict id, and with
// a journal, that approved steps point at an APPROVE reply for the same action.
ReplayReport replay_trace(const TrialTrace& trace, const sim::TaskLibrary& library,
                          const llm::PromptJournal* journal = nullptr,
                          std::optional<std::int64_t> seed_override = std::nullopt);

}  // namespace stepwise::bench
