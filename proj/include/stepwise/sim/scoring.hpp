#pragma once

#include "stepwise/types.hpp"

#include <span>
#include <vector>

namespace stepwise {

// Recorded score of one episode. After a fatal outcome it is the highest
// cumulative score reached strictly before the first fatal step; otherwise
// the final cumulative score. Never negative.
int episode_score(std::span<const StepOutcome> outcomes);

// Same rule applied to a recorded trace.
int episode_score(const TrialTrace& trace);

}  // namespace stepwise
