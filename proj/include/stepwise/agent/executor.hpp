#pragma once

#include "stepwise/agent/planner.hpp"
#include "stepwise/llm/backend.hpp"
#include "stepwise/llm/templates.hpp"
#include "stepwise/types.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stepwise::agent {

// Evaluator feedback f on a rejected candidate.
struct Feedback {
    std::string message;
    ActionCommand rejected_action;
    std::optional<int> violated_rule_id;
};

struct ActionProposal {
    std::string rationale;  // g_t, may be empty
    ActionCommand action;
};

// THINK:/ACTION: reply. Throws ParseError on a missing ACTION line or an
// action outside the grammar.
ActionProposal parse_action_response(std::string_view text);

class Executor {
public:
    explicit Executor(llm::CompletionClient& client,
                      const llm::TemplateStore& templates = llm::TemplateStore::builtin());

    // One candidate for the directive. A reply that does not parse gets one
    // re-prompt; a second failure throws ParseError.
    ActionProposal generate_action(const PlanDirective& directive, const std::vector<StepRecord>& history,
                                   const std::optional<Feedback>& feedback);

    // Planner-less variant: the task text and every insight replace the directive.
    ActionProposal generate_unplanned(const TaskSpec& task, const std::vector<memory::Insight>& insights,
                                      const std::vector<StepRecord>& history,
                                      const std::optional<Feedback>& feedback);

private:
    ActionProposal ask(const std::string& prompt);

    llm::CompletionClient& client_;
    const llm::TemplateStore& templates_;
};

}  // namespace stepwise::agent
