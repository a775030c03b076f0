#pragma once

#include "stepwise/types.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace stepwise::agent {

// One JSON object per step. The last line also carries the end reason, the
// final subtask list and the final reward.
std::string serialize_trace(const TrialTrace& trace);
TrialTrace parse_trace(std::string_view text);

void write_trace(const TrialTrace& trace, const std::filesystem::path& path);
TrialTrace read_trace(const std::filesystem::path& path);

// <root>/<task_id>/<variation>/attempt_<k>.trace
std::filesystem::path trace_path(const std::filesystem::path& root, const std::string& task_id,
                                 std::int64_t variation, int attempt);

}  // namespace stepwise::agent
