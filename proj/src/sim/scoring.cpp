#include "stepwise/sim/scoring.hpp"

#include <algorithm>

namespace stepwise {

int episode_score(std::span<const StepOutcome> outcomes) {
    int best = 0;
    for (const auto& o : outcomes) {
        if (o.fatal) return best;
        best = std::max(best, o.score);
    }
    return outcomes.empty() ? 0 : std::max(0, outcomes.back().score);
}

int episode_score(const TrialTrace& trace) {
    std::vector<StepOutcome> outcomes;
    outcomes.reserve(trace.steps.size());
    for (const auto& s : trace.steps) outcomes.push_back({s.observation, s.reward, s.terminal, s.fatal});
    return episode_score(outcomes);
}

}  // namespace stepwise
