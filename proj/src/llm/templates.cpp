#include "stepwise/llm/templates.hpp"

#include "stepwise/errors.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace stepwise::llm {

namespace {

constexpr std::string_view kPlannerPropose = R"(You are the Planner of an agent that acts in a text-based science environment.
Decide the next subtask the agent should work on, and pick the insights from earlier attempts that matter for it.

Task:
{task}

Suggested strategy from earlier attempts:
{strategy}

Insights from earlier attempts:
{insights}

Subtasks completed so far:
{completed}

Actions and observations so far:
{history}

Give one short subtask that can be finished in a few actions.
Reply in exactly this format:
SUBTASK: <the next subtask>
INSIGHTS: <ids of the relevant insights in brackets, such as [1, 3], or none>)";

constexpr std::string_view kPlannerRefine = R"(You are the Planner of an agent that acts in a text-based science environment.
The current subtask is still unfinished after several actions. Keep it, or rewrite it into something the agent can finish, and pick the insights from earlier attempts that matter for it.

Task:
{task}

Suggested strategy from earlier attempts:
{strategy}

Current subtask:
{subtask}

Insights from earlier attempts:
{insights}

Actions and observations so far:
{history}

Reply in exactly this format:
SUBTASK: <the refined subtask>
INSIGHTS: <ids of the relevant insights in brackets, such as [1, 3], or none>)";

constexpr std::string_view kExecutorAct = R"(You are the Executor of an agent that acts in a text-based science environment.

Current subtask:
{subtask}

Relevant insights:
{insights}

Actions and observations so far:
{history}

Feedback on your last proposal:
{feedback}

Available actions:
{actions}

Think about the next step, then choose exactly one action.
Reply in exactly this format:
THINK: <your reasoning>
ACTION: <one action>)";

constexpr std::string_view kExecutorUnplanned = R"(You are the Executor of an agent that acts in a text-based science environment.

Task:
{task}

Insights from earlier attempts:
{insights}

Actions and observations so far:
{history}

Feedback on your last proposal:
{feedback}

Available actions:
{actions}

Think about the next step, then choose exactly one action.
Reply in exactly this format:
THINK: <your reasoning>
ACTION: <one action>)";

constexpr std::string_view kEvaluatorJudge = R"(You are the Evaluator of an agent that acts in a text-based science environment.
Check the proposed action only against the rules below. Do not judge whether it is the best possible action.
Also report whether the current subtask is already finished, judging from the observations.

Current subtask:
{subtask}

Rules:
{rules}

Actions and observations so far:
{history}

Proposed action:
{candidate}

Reply in exactly this format:
VERDICT: APPROVE or REJECT
DONE: YES or NO
REASON: <the rule the action breaks, if any>)";

constexpr std::string_view kMemoryReflect = R"(You are the Memory-Generator of an agent that acts in a text-based science environment.
Reflect on the attempt below and write down what caused progress and what did not.

Task:
{task}

Final score: {score}

Insights already known:
{insights}

Trace of the attempt (score after each step in brackets):
{trace}

Write one insight per line, using one of these forms:
INSIGHT: X is necessary for Y
INSIGHT: X may be necessary for Y
INSIGHT: X may contribute to Y
INSIGHT: X does not contribute to Y
INSIGHT: X may not contribute to Y
If there is nothing new to add, reply with:
INSIGHTS: none)";

constexpr std::string_view kMemoryEssential = R"(You are the Memory-Generator of an agent that acts in a text-based science environment.
The steps marked with * raised the score and will be kept. Decide which of the other steps were needed to make the marked steps possible.

Task:
{task}

Trace of the attempt:
{trace}

Reply in exactly this format:
ESSENTIAL: <step numbers in brackets, such as [2, 5], or none>)";

constexpr std::string_view kMemoryAbstract = R"(You are the Memory-Generator of an agent that acts in a text-based science environment.
Summarise the kept steps into a short ordered list of milestones that a later attempt can follow.

Task:
{task}

Previous strategy:
{prior_strategy}

Kept steps:
{retained}

Write one milestone per line and list the step numbers it covers:
MILESTONE: <milestone> [steps: 1, 2])";

bool is_name_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

// Length of the placeholder name starting after '{' at `pos`, or 0.
std::size_t placeholder_length(std::string_view text, std::size_t pos) {
    std::size_t end = pos;
    while (end < text.size() && is_name_char(text[end])) ++end;
    if (end == pos || end >= text.size() || text[end] != '}') return 0;
    return end - pos;
}

}  // namespace

std::string render_template(std::string_view text, const PromptContext& context) {
    std::string out;
    out.reserve(text.size() + 256);
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if ((c == '{' || c == '}') && i + 1 < text.size() && text[i + 1] == c) {
            out += c;
            ++i;
            continue;
        }
        if (c == '{') {
            if (const std::size_t len = placeholder_length(text, i + 1); len > 0) {
                const std::string_view name = text.substr(i + 1, len);
                const auto it = context.find(name);
                if (it == context.end()) {
                    throw TemplateError("unbound placeholder {" + std::string(name) + "}");
                }
                out += it->second;
                i += len + 1;
                continue;
            }
        }
        out += c;
    }
    return out;
}

std::vector<std::string> template_placeholders(std::string_view text) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if ((text[i] == '{' || text[i] == '}') && i + 1 < text.size() && text[i + 1] == text[i]) {
            ++i;
            continue;
        }
        if (text[i] != '{') continue;
        if (const std::size_t len = placeholder_length(text, i + 1); len > 0) {
            std::string name(text.substr(i + 1, len));
            if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(std::move(name));
            i += len + 1;
        }
    }
    return names;
}

TemplateStore::TemplateStore() {
    templates_.emplace("planner.propose", kPlannerPropose);
    templates_.emplace("planner.refine", kPlannerRefine);
    templates_.emplace("executor.act", kExecutorAct);
    templates_.emplace("executor.act.unplanned", kExecutorUnplanned);
    templates_.emplace("evaluator.judge", kEvaluatorJudge);
    templates_.emplace("memory.reflect", kMemoryReflect);
    templates_.emplace("memory.essential", kMemoryEssential);
    templates_.emplace("memory.abstract", kMemoryAbstract);
}

const TemplateStore& TemplateStore::builtin() {
    static const TemplateStore store;
    return store;
}

TemplateStore TemplateStore::from_directory(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw TemplateError("template directory not found: " + dir);
    TemplateStore store;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& path : files) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        std::string text = buf.str();
        while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
        store.set(path.stem().string(), std::move(text));
    }
    return store;
}

void TemplateStore::set(std::string id, std::string text) { templates_[std::move(id)] = std::move(text); }

bool TemplateStore::contains(std::string_view id) const { return templates_.find(id) != templates_.end(); }

const std::string& TemplateStore::text(std::string_view id) const {
    const auto it = templates_.find(id);
    if (it == templates_.end()) throw TemplateError("unknown template id \"" + std::string(id) + "\"");
    return it->second;
}

std::vector<std::string> TemplateStore::ids() const {
    std::vector<std::string> out;
    for (const auto& [id, _] : templates_) out.push_back(id);
    return out;
}

std::string TemplateStore::render(std::string_view id, const PromptContext& context) const {
    try {
        return render_template(text(id), context);
    } catch (const TemplateError& e) {
        if (!contains(id)) throw;
        throw TemplateError(std::string(id) + ": " + e.what());
    }
}

std::string render_prompt(std::string_view template_id, const PromptContext& context) {
    return TemplateStore::builtin().render(template_id, context);
}

std::string format_reminder(std::string_view error) {
    return "\n\nYour previous reply could not be used (" + std::string(error) +
           "). Reply again using exactly the requested format.";
}

}  // namespace stepwise::llm
