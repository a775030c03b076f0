#pragma once

#include "stepwise/env/environment.hpp"
#include "stepwise/llm/backend.hpp"
#include "stepwise/llm/templates.hpp"
#include "stepwise/memory/memory.hpp"
#include "stepwise/types.hpp"

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace stepwise::agent {

inline constexpr std::string_view kInvalidActionObservation = "invalid action";

// No-op recorded when the Executor never produced a usable action.
ActionCommand invalid_action_placeholder();

// Appends the step with the next index, copying observation, score and flags
// from `outcome`, and closes the trace on a fatal outcome, a terminal one, or
// the last step of the budget. Throws ContractViolation on an ended trace.
void append_step(TrialTrace& trace, StepRecord step, const StepOutcome& outcome);

TrialTrace record_step(TrialTrace trace, const StepOutcome& outcome, const ActionCommand& action,
                       const std::string& rationale);

enum class AttemptStatus { Completed, Aborted };

std::string_view to_string(AttemptStatus status);

struct AttemptResult {
    TrialTrace trace;
    memory::MemoryStore memory_after;
    int episode_score = 0;
    AttemptStatus status = AttemptStatus::Completed;
    std::string abort_reason;
    std::vector<memory::NegativeRule> rules;  // s' in force during the attempt
};

struct TaskResult {
    TaskSpec task;
    std::vector<AttemptResult> attempts;
    int best_score = 0;  // over completed attempts

    std::vector<int> episode_scores() const;
};

struct RunHooks {
    // Called after every attempt, before the next one starts.
    std::function<void(const AttemptResult&)> on_attempt;
};

class Orchestrator {
public:
    Orchestrator(Environment& env, llm::CompletionClient& client, RunConfig config,
                 const llm::TemplateStore& templates = llm::TemplateStore::builtin());

    // One trial on a freshly reset environment, then memory generation.
    // Backend or planner failures abort the attempt and keep `memory_in`;
    // EnvironmentError propagates.
    AttemptResult run_attempt(const TaskSpec& task, const memory::MemoryStore& memory_in, int attempt_index);

    // K attempts in sequence, each reading the memory left by the previous one.
    TaskResult run_task(const TaskSpec& task, memory::MemoryStore memory_seed = {}, const RunHooks& hooks = {});

private:
    Environment& env_;
    llm::CompletionClient& client_;
    RunConfig config_;
    const llm::TemplateStore& templates_;
};

// Builds a per-run client over `backends` and runs the task.
TaskResult run_task(const TaskSpec& task, Environment& env, const llm::BackendSet& backends, const RunConfig& config,
                    llm::PromptJournal* journal = nullptr, memory::MemoryStore memory_seed = {},
                    const RunHooks& hooks = {});

}  // namespace stepwise::agent
