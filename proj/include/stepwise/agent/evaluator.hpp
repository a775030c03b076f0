#pragma once

#include "stepwise/agent/executor.hpp"
#include "stepwise/agent/planner.hpp"
#include "stepwise/llm/backend.hpp"
#include "stepwise/llm/templates.hpp"
#include "stepwise/memory/memory.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace stepwise::agent {

struct Verdict {
    bool approved = true;
    std::optional<Feedback> feedback;  // present iff rejected
    bool subtask_done = false;
    int rule_checked_count = 0;
    bool fail_open = false;
    int verdict_id = -1;  // Evaluator invocation index of the deciding reply
};

// VERDICT:/DONE:/REASON: reply. The violated rule is read from "[N]" or
// "rule N" in the reason when N names one of `rules`. A rejection always
// reports the subtask as not done. Throws ParseError without a readable
// VERDICT line.
Verdict parse_verdict(std::string_view text, const ActionCommand& candidate,
                      const std::vector<memory::NegativeRule>& rules);

enum class GateDecision { Retry, ForceExecute };

// Retry while fewer than `cap` rejections happened in this step.
GateDecision deliberation_gate(int rejections, int cap);

class Evaluator {
public:
    explicit Evaluator(llm::CompletionClient& client,
                       const llm::TemplateStore& templates = llm::TemplateStore::builtin());

    // Judges `candidate` against `rules` only. With no rules the candidate is
    // approved whatever the reply says. A reply that does not parse gets one
    // re-prompt; a second failure approves with subtask_done=false and
    // fail_open set.
    Verdict evaluate_candidate(const PlanDirective& directive, const std::vector<memory::NegativeRule>& rules,
                               const ActionCommand& candidate, const std::vector<StepRecord>& history);

private:
    llm::CompletionClient& client_;
    const llm::TemplateStore& templates_;
};

}  // namespace stepwise::agent
