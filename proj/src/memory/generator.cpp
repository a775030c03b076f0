#include "stepwise/memory/generator.hpp"

#include "stepwise/errors.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cctype>
#include <regex>
#include <set>
#include <sstream>

namespace stepwise::memory {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

bool take_label(std::string& line, std::string_view label) {
    const std::string prefix = std::string(label) + ":";
    if (line.size() < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (std::toupper(static_cast<unsigned char>(line[i])) != prefix[i]) return false;
    }
    line = trim(std::string_view(line).substr(prefix.size()));
    return true;
}

bool is_none(const std::string& s) {
    std::string lower;
    for (char c : s) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return lower == "none" || lower == "[]" || lower == "[none]" || lower == "none.";
}

// "1, 2-4, 7" with optional brackets; throws ParseError on other tokens.
std::vector<int> parse_index_list(const std::string& text) {
    std::vector<int> out;
    std::string cleaned;
    for (char c : text) cleaned += (c == '[' || c == ']' || c == ',') ? ' ' : c;
    std::istringstream in(cleaned);
    std::string token;
    static const std::regex range(R"((\d+)\s*-\s*(\d+))");
    static const std::regex single(R"(\d+)");
    while (in >> token) {
        std::smatch m;
        if (std::regex_match(token, m, range)) {
            const int lo = std::stoi(m[1].str());
            const int hi = std::stoi(m[2].str());
            if (hi < lo || hi - lo > 10000) throw ParseError("bad step range \"" + token + "\"");
            for (int i = lo; i <= hi; ++i) out.push_back(i);
        } else if (std::regex_match(token, single)) {
            out.push_back(std::stoi(token));
        } else {
            throw ParseError("bad step reference \"" + token + "\"");
        }
    }
    return out;
}

}  // namespace

std::vector<Insight> parse_reflection(std::string_view text) {
    std::vector<Insight> out;
    bool saw_none = false;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (take_label(line, "INSIGHTS")) {
            if (!is_none(line)) throw ParseError("INSIGHTS line must read \"none\"");
            saw_none = true;
        } else if (take_label(line, "INSIGHT")) {
            auto insight = parse_insight_sentence(line);
            if (!insight) throw ParseError("unreadable insight \"" + line + "\"");
            out.push_back(std::move(*insight));
        }
    }
    if (out.empty() && !saw_none) throw ParseError("reflection holds no INSIGHT lines");
    return out;
}

std::vector<int> parse_essential(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (!take_label(line, "ESSENTIAL")) continue;
        if (is_none(line)) return {};
        return parse_index_list(line);
    }
    throw ParseError("missing ESSENTIAL line");
}

std::vector<Milestone> parse_milestones(std::string_view text) {
    static const std::regex with_steps(R"(^(.*?)\s*\[\s*steps?\s*:\s*([^\]]*)\]\s*\.?$)", std::regex::icase);
    std::vector<Milestone> out;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (!take_label(line, "MILESTONE")) continue;
        Milestone m;
        std::smatch match;
        if (std::regex_match(line, match, with_steps)) {
            m.text = trim(match[1].str());
            m.steps = parse_index_list(match[2].str());
        } else {
            m.text = line;
        }
        if (!m.text.empty()) out.push_back(std::move(m));
    }
    return out;
}

std::vector<int> rewarded_steps(const TrialTrace& trace) {
    std::vector<int> out;
    int previous = 0;
    for (const auto& s : trace.steps) {
        if (s.reward > previous) out.push_back(s.index);
        if (!s.fatal) previous = std::max(previous, s.reward);
    }
    return out;
}

std::string render_trace(const TrialTrace& trace, const std::vector<int>& marked) {
    if (trace.steps.empty()) return "(no actions taken)";
    std::string out;
    for (const auto& s : trace.steps) {
        if (!out.empty()) out += '\n';
        const bool star = std::find(marked.begin(), marked.end(), s.index) != marked.end();
        out += std::to_string(s.index) + "." + (star ? "*" : "") + " > " + s.action.text() + "\n   " + s.observation +
               " [" + std::to_string(s.reward) + "]";
    }
    return out;
}

MemoryGenerator::MemoryGenerator(llm::CompletionClient& client, const llm::TemplateStore& templates)
    : client_(client), templates_(templates) {}

GenerationReport MemoryGenerator::generate(const TaskSpec& task, const MemoryStore& prior, const TrialTrace& trace,
                                           int final_reward) {
    if (!trace.ended()) throw ContractViolation("memory generation needs an ended trace");
    GenerationReport report;
    client_.set_coordinates(trace.attempt, static_cast<int>(trace.steps.size()));

    const std::string reflection = client_.complete(
        llm::Role::Memory, templates_.render("memory.reflect", {{"task", task.description},
                                                                {"score", std::to_string(final_reward)},
                                                                {"insights", render_insights(prior.insights)},
                                                                {"trace", render_trace(trace)}}));
    std::vector<Insight> fresh;
    try {
        fresh = parse_reflection(reflection);
    } catch (const ParseError& e) {
        spdlog::warn("reflection for {} attempt {} is malformed ({}); memory left unchanged", trace.task_id,
                     trace.attempt, e.what());
        report.store = prior;
        report.reflection_malformed = true;
        report.warnings.push_back(e.what());
        return report;
    }
    for (auto& i : fresh) i.source_attempt = trace.attempt;

    report.store.task_id = prior.task_id.empty() ? trace.task_id : prior.task_id;
    report.store.insights = merge_insights(prior.insights, fresh);
    report.store.attempt_count = std::max(prior.attempt_count, trace.attempt);
    report.store.strategy = abstract_strategy(task, prior, trace, report);
    return report;
}

Strategy MemoryGenerator::abstract_strategy(const TaskSpec& task, const MemoryStore& prior, const TrialTrace& trace,
                                            GenerationReport& report) {
    const std::vector<int> rewarded = rewarded_steps(trace);
    if (rewarded.empty()) return prior.strategy;

    std::set<int> retained(rewarded.begin(), rewarded.end());
    const std::string essential_reply = client_.complete(
        llm::Role::Memory,
        templates_.render("memory.essential", {{"task", task.description}, {"trace", render_trace(trace, rewarded)}}));
    try {
        for (int i : parse_essential(essential_reply)) {
            if (i >= 1 && i <= static_cast<int>(trace.steps.size())) {
                retained.insert(i);
            } else {
                report.warnings.push_back("essential step " + std::to_string(i) + " is not in the trace");
            }
        }
    } catch (const ParseError& e) {
        spdlog::warn("essential-step reply is malformed ({}); keeping rewarded steps only", e.what());
        report.warnings.push_back(e.what());
    }
    report.retained_steps.assign(retained.begin(), retained.end());

    std::string kept;
    for (int i : report.retained_steps) {
        const auto& s = trace.steps[static_cast<std::size_t>(i - 1)];
        if (!kept.empty()) kept += '\n';
        kept += std::to_string(i) + ". " + s.action.text() + " -> " + s.observation;
    }
    const std::string summary = client_.complete(
        llm::Role::Memory, templates_.render("memory.abstract", {{"task", task.description},
                                                                 {"prior_strategy", render_strategy(prior.strategy)},
                                                                 {"retained", kept}}));
    Strategy strategy;
    strategy.source_attempt = trace.attempt;
    strategy.raw_summary = summary;
    try {
        for (auto& m : parse_milestones(summary)) {
            std::vector<int> steps;
            for (int i : m.steps) {
                if (retained.count(i) > 0 && std::find(steps.begin(), steps.end(), i) == steps.end()) steps.push_back(i);
            }
            if (steps.empty()) {
                report.warnings.push_back("milestone \"" + m.text + "\" cites no kept step; dropped");
                continue;
            }
            strategy.milestones.push_back({std::move(m.text), std::move(steps)});
        }
    } catch (const ParseError& e) {
        report.warnings.push_back(e.what());
        strategy.milestones.clear();
    }
    if (strategy.milestones.empty()) {
        spdlog::warn("no usable milestones for {} attempt {}; using rewarded actions", trace.task_id, trace.attempt);
        report.strategy_fallback = true;
        for (int i : rewarded) {
            strategy.milestones.push_back({trace.steps[static_cast<std::size_t>(i - 1)].action.text(), {i}});
        }
    }
    return strategy;
}

MemoryStore generate_memory(const TaskSpec& task, const MemoryStore& prior, const TrialTrace& trace, int final_reward,
                            llm::CompletionClient& client, const llm::TemplateStore& templates) {
    return MemoryGenerator(client, templates).generate(task, prior, trace, final_reward).store;
}

}  // namespace stepwise::memory
