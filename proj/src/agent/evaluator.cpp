#include "stepwise/agent/evaluator.hpp"

#include "stepwise/agent/prompts.hpp"
#include "stepwise/errors.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cctype>
#include <regex>

namespace stepwise::agent {

namespace {

std::string first_word_upper(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (!std::isalpha(static_cast<unsigned char>(c))) {
            if (out.empty()) continue;
            break;
        }
        out += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    return out;
}

std::optional<int> cited_rule(const std::string& reason, const std::vector<memory::NegativeRule>& rules) {
    static const std::regex pattern(R"(\[(\d+)\]|\brule\s*#?\s*(\d+))", std::regex::icase);
    for (auto it = std::sregex_iterator(reason.begin(), reason.end(), pattern); it != std::sregex_iterator(); ++it) {
        const auto& m = *it;
        const int id = std::stoi(m[1].matched ? m[1].str() : m[2].str());
        if (std::any_of(rules.begin(), rules.end(), [&](const auto& r) { return r.id == id; })) return id;
    }
    return std::nullopt;
}

}  // namespace

Verdict parse_verdict(std::string_view text, const ActionCommand& candidate,
                      const std::vector<memory::NegativeRule>& rules) {
    const auto verdict = labeled_value(text, "VERDICT");
    if (!verdict) throw ParseError("missing VERDICT line");
    const std::string word = first_word_upper(*verdict);
    if (word != "APPROVE" && word != "REJECT") throw ParseError("VERDICT must be APPROVE or REJECT, got \"" + *verdict + "\"");

    Verdict out;
    out.rule_checked_count = static_cast<int>(rules.size());
    out.approved = word == "APPROVE";
    if (const auto done = labeled_value(text, "DONE")) {
        const std::string flag = first_word_upper(*done);
        if (flag != "YES" && flag != "NO") throw ParseError("DONE must be YES or NO, got \"" + *done + "\"");
        out.subtask_done = flag == "YES";
    }
    if (out.approved) return out;

    out.subtask_done = false;
    const std::string reason = labeled_value(text, "REASON").value_or("");
    Feedback fb;
    fb.rejected_action = candidate;
    fb.violated_rule_id = cited_rule(reason, rules);
    fb.message = "rejected: \"" + candidate.text() + "\"";
    if (!reason.empty()) fb.message += " " + reason;
    if (fb.violated_rule_id) {
        const auto rule = std::find_if(rules.begin(), rules.end(), [&](const auto& r) { return r.id == *fb.violated_rule_id; });
        fb.message += " (rule [" + std::to_string(rule->id) + "] " + rule->text + ")";
    }
    out.feedback = std::move(fb);
    return out;
}

GateDecision deliberation_gate(int rejections, int cap) {
    return rejections < cap ? GateDecision::Retry : GateDecision::ForceExecute;
}

Evaluator::Evaluator(llm::CompletionClient& client, const llm::TemplateStore& templates)
    : client_(client), templates_(templates) {}

Verdict Evaluator::evaluate_candidate(const PlanDirective& directive, const std::vector<memory::NegativeRule>& rules,
                                      const ActionCommand& candidate, const std::vector<StepRecord>& history) {
    const std::string prompt = templates_.render("evaluator.judge", {{"subtask", directive.subtask},
                                                                     {"rules", memory::render_rules(rules)},
                                                                     {"history", render_history(history)},
                                                                     {"candidate", candidate.text()}});
    Verdict verdict;
    try {
        verdict = parse_verdict(client_.complete(llm::Role::Evaluator, prompt), candidate, rules);
    } catch (const ParseError& first) {
        spdlog::warn("evaluator reply unusable ({}), asking again", first.what());
        try {
            verdict = parse_verdict(client_.complete(llm::Role::Evaluator, prompt + llm::format_reminder(first.what())),
                                    candidate, rules);
        } catch (const ParseError& second) {
            spdlog::warn("evaluator reply unusable again ({}), approving \"{}\"", second.what(), candidate.text());
            verdict = Verdict{};
            verdict.rule_checked_count = static_cast<int>(rules.size());
            verdict.fail_open = true;
        }
    }
    verdict.verdict_id = client_.invocations(llm::Role::Evaluator) - 1;
    if (!verdict.approved && rules.empty()) {
        spdlog::warn("evaluator rejected \"{}\" with no rules in force; approving", candidate.text());
        verdict.approved = true;
        verdict.feedback.reset();
    }
    return verdict;
}

}  // namespace stepwise::agent
