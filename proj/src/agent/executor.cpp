#include "stepwise/agent/executor.hpp"

#include "stepwise/agent/prompts.hpp"
#include "stepwise/errors.hpp"

#include <spdlog/spdlog.h>

namespace stepwise::agent {

namespace {

std::string render_feedback(const std::optional<Feedback>& feedback) {
    return feedback ? feedback->message : "(none)";
}

}  // namespace

ActionProposal parse_action_response(std::string_view text) {
    const auto action = labeled_value(text, "ACTION");
    if (!action || action->empty()) throw ParseError("missing ACTION line");
    ActionProposal out;
    out.action = parse_action_text(*action);
    out.rationale = labeled_value(text, "THINK").value_or("");
    return out;
}

Executor::Executor(llm::CompletionClient& client, const llm::TemplateStore& templates)
    : client_(client), templates_(templates) {}

ActionProposal Executor::generate_action(const PlanDirective& directive, const std::vector<StepRecord>& history,
                                         const std::optional<Feedback>& feedback) {
    const std::string prompt =
        templates_.render("executor.act", {{"subtask", directive.subtask},
                                           {"insights", memory::render_insights(directive.relevant_insights)},
                                           {"history", render_history(history)},
                                           {"feedback", render_feedback(feedback)},
                                           {"actions", render_action_table()}});
    return ask(prompt);
}

ActionProposal Executor::generate_unplanned(const TaskSpec& task, const std::vector<memory::Insight>& insights,
                                            const std::vector<StepRecord>& history,
                                            const std::optional<Feedback>& feedback) {
    const std::string prompt =
        templates_.render("executor.act.unplanned", {{"task", task.description},
                                                     {"insights", memory::render_insights(insights)},
                                                     {"history", render_history(history)},
                                                     {"feedback", render_feedback(feedback)},
                                                     {"actions", render_action_table()}});
    return ask(prompt);
}

ActionProposal Executor::ask(const std::string& prompt) {
    const std::string reply = client_.complete(llm::Role::Executor, prompt);
    try {
        return parse_action_response(reply);
    } catch (const ParseError& first) {
        spdlog::warn("executor reply unusable ({}), asking again", first.what());
        return parse_action_response(client_.complete(llm::Role::Executor, prompt + llm::format_reminder(first.what())));
    }
}

}  // namespace stepwise::agent
