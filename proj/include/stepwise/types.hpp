#pragma once

#include "stepwise/actions.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stepwise {

enum class TaskKind { Short, Long };

// Environment step limit for a task kind: 37 short, 70 long.
int step_budget(TaskKind kind);

std::string_view to_string(TaskKind kind);
TaskKind task_kind_from_string(std::string_view text);

struct TaskSpec {
    std::string task_id;
    std::string description;
    TaskKind kind = TaskKind::Short;
    std::int64_t variation_seed = 0;

    int budget() const { return step_budget(kind); }
};

// Environment response to one action. `score` is cumulative.
struct StepOutcome {
    std::string observation;
    int score = 0;
    bool terminal = false;
    bool fatal = false;

    bool operator==(const StepOutcome&) const = default;
};

// How an executed step got past the Evaluator.
enum class Approval {
    Approved,      // Evaluator approved the candidate
    FailOpen,      // Evaluator output unusable; approved by default
    ForceExecute,  // deliberation cap reached; latest candidate executed anyway
    Ungated,       // evaluator disabled by ablation
    InvalidOutput  // Executor never produced a parseable action; no env step taken
};

std::string_view to_string(Approval approval);
Approval approval_from_string(std::string_view text);

struct StepRecord {
    int index = 0;
    int reward = 0;
    ActionCommand action;
    std::string observation;
    std::string rationale;

    // Audit trail for the gate that released the action.
    Approval approval = Approval::Approved;
    int verdict_id = -1;  // Evaluator invocation index, -1 when no verdict
    int rejections = 0;
    std::string subtask;
    std::vector<std::string> completed;  // snapshot of q when the step ran
    bool terminal = false;
    bool fatal = false;

    bool operator==(const StepRecord&) const = default;
};

enum class EndReason { Running, TaskComplete, BudgetExhausted, FatalPenalty };

std::string_view to_string(EndReason reason);
EndReason end_reason_from_string(std::string_view text);

struct TrialTrace {
    std::string task_id;
    std::int64_t variation = 0;
    int attempt = 0;
    int budget = 0;
    std::vector<StepRecord> steps;
    std::vector<std::string> completed_subtasks;
    int final_reward = 0;
    EndReason ended_by = EndReason::Running;

    bool ended() const { return ended_by != EndReason::Running; }
    // Cumulative score after the last step; 0 before any step.
    int current_score() const { return steps.empty() ? 0 : steps.back().reward; }

    bool operator==(const TrialTrace&) const = default;
};

struct RunConfig {
    int attempts = 5;
    int max_sub_steps = 8;
    int deliberation_cap = 3;
    bool planner_off = false;
    bool evaluator_off = false;

    // Throws ConfigError when a bound is below 1.
    void validate() const;
};

}  // namespace stepwise
