#include "stepwise/types.hpp"

#include "stepwise/errors.hpp"

namespace stepwise {

LintError::LintError(std::vector<std::string> issues)
    : Error([&] {
          std::string msg = "world lint failed:";
          for (const auto& i : issues) msg += "\n  - " + i;
          return msg;
      }()),
      issues_(std::move(issues)) {}

int step_budget(TaskKind kind) { return kind == TaskKind::Short ? 37 : 70; }

std::string_view to_string(TaskKind kind) { return kind == TaskKind::Short ? "short" : "long"; }

TaskKind task_kind_from_string(std::string_view text) {
    if (text == "short" || text == "S") return TaskKind::Short;
    if (text == "long" || text == "L") return TaskKind::Long;
    throw ParseError("unknown task kind \"" + std::string(text) + "\"");
}

std::string_view to_string(Approval approval) {
    switch (approval) {
        case Approval::Approved: return "approved";
        case Approval::FailOpen: return "fail_open";
        case Approval::ForceExecute: return "force_execute";
        case Approval::Ungated: return "ungated";
        case Approval::InvalidOutput: return "invalid_output";
    }
    return "approved";
}

Approval approval_from_string(std::string_view text) {
    for (auto a : {Approval::Approved, Approval::FailOpen, Approval::ForceExecute, Approval::Ungated,
                   Approval::InvalidOutput}) {
        if (to_string(a) == text) return a;
    }
    throw ParseError("unknown approval annotation \"" + std::string(text) + "\"");
}

std::string_view to_string(EndReason reason) {
    switch (reason) {
        case EndReason::Running: return "running";
        case EndReason::TaskComplete: return "task_complete";
        case EndReason::BudgetExhausted: return "budget_exhausted";
        case EndReason::FatalPenalty: return "fatal_penalty";
    }
    return "running";
}

EndReason end_reason_from_string(std::string_view text) {
    for (auto r : {EndReason::Running, EndReason::TaskComplete, EndReason::BudgetExhausted,
                   EndReason::FatalPenalty}) {
        if (to_string(r) == text) return r;
    }
    throw ParseError("unknown end reason \"" + std::string(text) + "\"");
}

void RunConfig::validate() const {
    if (attempts < 1) throw ConfigError("attempts must be >= 1");
    if (max_sub_steps < 1) throw ConfigError("max_sub_steps must be >= 1");
    if (deliberation_cap < 1) throw ConfigError("deliberation_cap must be >= 1");
}

}  // namespace stepwise
