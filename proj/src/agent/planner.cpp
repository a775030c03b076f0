#include "stepwise/agent/planner.hpp"

#include "stepwise/agent/prompts.hpp"
#include "stepwise/errors.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cctype>
#include <charconv>

namespace stepwise::agent {

std::string_view to_string(PlanOrigin origin) { return origin == PlanOrigin::Proposed ? "proposed" : "refined"; }

PlanResponse parse_plan_response(std::string_view text, const std::vector<memory::Insight>& catalog) {
    PlanResponse out;
    const auto subtask = labeled_value(text, "SUBTASK");
    if (!subtask || subtask->empty()) throw ParseError("missing SUBTASK line");
    out.subtask = *subtask;

    const auto cited = labeled_value(text, "INSIGHTS");
    if (!cited) return out;
    std::string list = *cited;
    std::transform(list.begin(), list.end(), list.begin(), [](unsigned char c) { return std::tolower(c); });
    if (list.empty() || list == "none" || list == "[]" || list == "[none]") return out;

    std::vector<int> seen;
    std::string token;
    auto flush = [&] {
        if (token.empty()) return;
        int id = 0;
        const auto [p, ec] = std::from_chars(token.data(), token.data() + token.size(), id);
        if (ec != std::errc() || p != token.data() + token.size()) {
            out.warnings.push_back("unreadable insight citation \"" + token + "\" dropped");
        } else if (std::find(seen.begin(), seen.end(), id) == seen.end()) {
            seen.push_back(id);
            const auto it = std::find_if(catalog.begin(), catalog.end(), [&](const auto& i) { return i.id == id; });
            if (it == catalog.end()) {
                out.warnings.push_back("unknown insight id " + std::to_string(id) + " dropped");
            } else {
                out.cited.push_back(*it);
            }
        }
        token.clear();
    };
    for (char c : list) {
        if (c == '[' || c == ']' || c == ',' || std::isspace(static_cast<unsigned char>(c))) {
            flush();
        } else {
            token += c;
        }
    }
    flush();
    return out;
}

Planner::Planner(llm::CompletionClient& client, const llm::TemplateStore& templates)
    : client_(client), templates_(templates) {}

PlanDirective Planner::propose_subtask(const TaskSpec& task, const memory::Strategy& strategy,
                                       const std::vector<memory::Insight>& insights,
                                       const std::vector<StepRecord>& history,
                                       const std::vector<std::string>& completed) {
    const std::string prompt = templates_.render(
        "planner.propose", {{"task", task.description},
                            {"strategy", memory::render_strategy(strategy)},
                            {"insights", memory::render_insights(insights)},
                            {"completed", render_completed(completed)},
                            {"history", render_history(history, kPlannerHistoryPairs)}});
    return ask(prompt, insights, PlanOrigin::Proposed);
}

PlanDirective Planner::refine_subtask(const TaskSpec& task, const memory::Strategy& strategy,
                                      const PlanDirective& current, const std::vector<memory::Insight>& insights,
                                      const std::vector<StepRecord>& history) {
    const std::string prompt = templates_.render(
        "planner.refine", {{"task", task.description},
                           {"strategy", memory::render_strategy(strategy)},
                           {"subtask", current.subtask},
                           {"insights", memory::render_insights(insights)},
                           {"history", render_history(history, kPlannerHistoryPairs)}});
    return ask(prompt, insights, PlanOrigin::Refined);
}

PlanDirective Planner::ask(const std::string& prompt, const std::vector<memory::Insight>& insights, PlanOrigin origin) {
    std::string reply = client_.complete(llm::Role::Planner, prompt);
    PlanResponse parsed;
    try {
        parsed = parse_plan_response(reply, insights);
    } catch (const ParseError& first) {
        spdlog::warn("planner reply unusable ({}), asking again", first.what());
        reply = client_.complete(llm::Role::Planner, prompt + llm::format_reminder(first.what()));
        parsed = parse_plan_response(reply, insights);
    }
    for (const auto& w : parsed.warnings) spdlog::warn("planner: {}", w);
    return {std::move(parsed.subtask), std::move(parsed.cited), origin, ++steps_, std::move(parsed.warnings)};
}

}  // namespace stepwise::agent
