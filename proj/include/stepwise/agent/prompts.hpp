#pragma once

#include "stepwise/types.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stepwise::agent {

inline constexpr std::size_t kPlannerHistoryPairs = 30;

// "> action" then the observation, per step; no rationales, no rewards.
// With `max_pairs` set, only the most recent pairs are kept.
std::string render_history(std::span<const StepRecord> steps, std::optional<std::size_t> max_pairs = std::nullopt);

// Numbered list, or "(none yet)".
std::string render_completed(const std::vector<std::string>& completed);

// One "verb OBJ ..." usage line per action table row.
std::string render_action_table();

// Value after "LABEL:" on the first line that starts with it (case-insensitive),
// trimmed. nullopt when no such line exists.
std::optional<std::string> labeled_value(std::string_view text, std::string_view label);

}  // namespace stepwise::agent
