#include "stepwise/agent/orchestrator.hpp"

#include "stepwise/agent/evaluator.hpp"
#include "stepwise/agent/executor.hpp"
#include "stepwise/agent/planner.hpp"
#include "stepwise/errors.hpp"
#include "stepwise/memory/generator.hpp"
#include "stepwise/sim/scoring.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <optional>

namespace stepwise::agent {

ActionCommand invalid_action_placeholder() { return ActionCommand{"wait", {}, "(invalid)"}; }

void append_step(TrialTrace& trace, StepRecord step, const StepOutcome& outcome) {
    if (trace.ended()) throw ContractViolation("cannot append a step to an ended trace");
    if (trace.budget > 0 && static_cast<int>(trace.steps.size()) >= trace.budget) {
        throw ContractViolation("trace already holds its budget of " + std::to_string(trace.budget) + " steps");
    }
    step.index = static_cast<int>(trace.steps.size()) + 1;
    step.observation = outcome.observation;
    step.reward = outcome.score;
    step.terminal = outcome.terminal || outcome.fatal;
    step.fatal = outcome.fatal;
    trace.steps.push_back(std::move(step));

    if (outcome.fatal) {
        trace.ended_by = EndReason::FatalPenalty;
    } else if (outcome.terminal) {
        trace.ended_by = EndReason::TaskComplete;
    } else if (trace.budget > 0 && static_cast<int>(trace.steps.size()) == trace.budget) {
        trace.ended_by = EndReason::BudgetExhausted;
    }
    trace.final_reward = episode_score(trace);
}

TrialTrace record_step(TrialTrace trace, const StepOutcome& outcome, const ActionCommand& action,
                       const std::string& rationale) {
    StepRecord step;
    step.action = action;
    step.rationale = rationale;
    append_step(trace, std::move(step), outcome);
    return trace;
}

std::string_view to_string(AttemptStatus status) {
    return status == AttemptStatus::Completed ? "completed" : "aborted";
}

std::vector<int> TaskResult::episode_scores() const {
    std::vector<int> out;
    for (const auto& a : attempts) out.push_back(a.episode_score);
    return out;
}

Orchestrator::Orchestrator(Environment& env, llm::CompletionClient& client, RunConfig config,
                           const llm::TemplateStore& templates)
    : env_(env), client_(client), config_(config), templates_(templates) {
    config_.validate();
}

AttemptResult Orchestrator::run_attempt(const TaskSpec& task, const memory::MemoryStore& memory_in,
                                        int attempt_index) {
    AttemptResult result;
    result.memory_after = memory_in;
    result.rules = memory::extract_negative_rules(memory_in);
    const std::vector<memory::NegativeRule>& rules = result.rules;

    TrialTrace& trace = result.trace;
    trace.task_id = task.task_id;
    trace.variation = task.variation_seed;
    trace.attempt = attempt_index;
    trace.budget = task.budget();

    Planner planner(client_, templates_);
    Executor executor(client_, templates_);
    Evaluator evaluator(client_, templates_);

    std::vector<std::string>& q = trace.completed_subtasks;
    PlanDirective directive;
    bool need_new = true;
    auto steps_taken = [&] { return static_cast<int>(trace.steps.size()); };

    try {
        while (steps_taken() < trace.budget && !trace.ended()) {
            client_.set_coordinates(attempt_index, steps_taken() + 1);
            if (config_.planner_off) {
                directive = PlanDirective{task.description, memory_in.insights, PlanOrigin::Proposed, 0, {}};
            } else if (need_new) {
                directive = planner.propose_subtask(task, memory_in.strategy, memory_in.insights, trace.steps, q);
            } else {
                directive = planner.refine_subtask(task, memory_in.strategy, directive, memory_in.insights, trace.steps);
            }
            need_new = false;

            bool done = false;
            const int t0 = steps_taken();
            while (steps_taken() < t0 + config_.max_sub_steps && !done && steps_taken() < trace.budget &&
                   !trace.ended()) {
                client_.set_coordinates(attempt_index, steps_taken() + 1);
                std::optional<Feedback> feedback;
                std::optional<ActionProposal> latest;
                Verdict verdict;
                int deliberations = 0;
                int rejections = 0;
                StepRecord record;
                record.approval = Approval::InvalidOutput;

                while (true) {
                    if (deliberation_gate(deliberations, config_.deliberation_cap) == GateDecision::ForceExecute) {
                        if (latest) {
                            record.approval = Approval::ForceExecute;
                            spdlog::info("deliberation cap reached at step {}; executing \"{}\"", steps_taken() + 1,
                                         latest->action.text());
                        }
                        break;
                    }
                    std::optional<ActionProposal> proposal;
                    try {
                        proposal = config_.planner_off
                                       ? executor.generate_unplanned(task, memory_in.insights, trace.steps, feedback)
                                       : executor.generate_action(directive, trace.steps, feedback);
                    } catch (const ParseError& e) {
                        spdlog::warn("executor output unusable at step {}: {}", steps_taken() + 1, e.what());
                        ++deliberations;
                        continue;
                    }
                    latest = proposal;
                    if (config_.evaluator_off) {
                        record.approval = Approval::Ungated;
                        break;
                    }
                    verdict = evaluator.evaluate_candidate(directive, rules, proposal->action, trace.steps);
                    record.verdict_id = verdict.verdict_id;
                    if (verdict.approved) {
                        record.approval = verdict.fail_open ? Approval::FailOpen : Approval::Approved;
                        break;
                    }
                    ++rejections;
                    ++deliberations;
                    feedback = verdict.feedback;
                }

                record.rejections = rejections;
                record.subtask = directive.subtask;
                record.completed = q;
                StepOutcome outcome;
                if (record.approval == Approval::InvalidOutput) {
                    record.action = invalid_action_placeholder();
                    record.verdict_id = -1;
                    outcome = StepOutcome{std::string(kInvalidActionObservation), trace.current_score(), false, false};
                } else {
                    record.action = latest->action;
                    record.rationale = latest->rationale;
                    outcome = env_.step(record.action);
                }
                const bool approved = record.approval == Approval::Approved || record.approval == Approval::FailOpen;
                append_step(trace, std::move(record), outcome);

                if (!config_.planner_off && approved && verdict.subtask_done) {
                    done = true;
                    q.push_back(directive.subtask);
                    need_new = true;
                }
            }
        }
    } catch (const EnvironmentError&) {
        throw;
    } catch (const Error& e) {
        spdlog::error("attempt {} of {} aborted: {}", attempt_index, task.task_id, e.what());
        result.status = AttemptStatus::Aborted;
        result.abort_reason = e.what();
        result.episode_score = 0;
        return result;
    }

    result.episode_score = trace.final_reward;
    try {
        result.memory_after =
            memory::MemoryGenerator(client_, templates_).generate(task, memory_in, trace, trace.final_reward).store;
    } catch (const EnvironmentError&) {
        throw;
    } catch (const Error& e) {
        spdlog::error("memory generation for attempt {} of {} failed: {}", attempt_index, task.task_id, e.what());
        result.status = AttemptStatus::Aborted;
        result.abort_reason = e.what();
        result.memory_after = memory_in;
    }
    return result;
}

TaskResult Orchestrator::run_task(const TaskSpec& task, memory::MemoryStore memory_seed, const RunHooks& hooks) {
    TaskResult result;
    result.task = task;
    if (memory_seed.task_id.empty()) memory_seed.task_id = task.task_id;
    memory::MemoryStore memory = std::move(memory_seed);
    for (int k = 1; k <= config_.attempts; ++k) {
        client_.set_coordinates(k, 0);
        env_.reset(task.task_id, task.variation_seed);
        AttemptResult attempt = run_attempt(task, memory, k);
        memory = attempt.memory_after;
        if (attempt.status == AttemptStatus::Completed) result.best_score = std::max(result.best_score, attempt.episode_score);
        spdlog::info("{} attempt {}: score {} ({}, {})", task.task_id, k, attempt.episode_score,
                     to_string(attempt.trace.ended_by), to_string(attempt.status));
        if (hooks.on_attempt) hooks.on_attempt(attempt);
        result.attempts.push_back(std::move(attempt));
    }
    return result;
}

TaskResult run_task(const TaskSpec& task, Environment& env, const llm::BackendSet& backends, const RunConfig& config,
                    llm::PromptJournal* journal, memory::MemoryStore memory_seed, const RunHooks& hooks) {
    llm::CompletionClient client(backends, journal);
    Orchestrator orchestrator(env, client, config);
    return orchestrator.run_task(task, std::move(memory_seed), hooks);
}

}  // namespace stepwise::agent
