#pragma once

#include "stepwise/llm/backend.hpp"
#include "stepwise/llm/templates.hpp"
#include "stepwise/memory/memory.hpp"
#include "stepwise/types.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace stepwise::agent {

enum class PlanOrigin { Proposed, Refined };

std::string_view to_string(PlanOrigin origin);

// What the Planner hands the Executor: the subtask m and the insights s it cited.
struct PlanDirective {
    std::string subtask;
    std::vector<memory::Insight> relevant_insights;
    PlanOrigin origin = PlanOrigin::Proposed;
    int planner_step = 0;
    std::vector<std::string> warnings;
};

struct PlanResponse {
    std::string subtask;
    std::vector<memory::Insight> cited;
    std::vector<std::string> warnings;  // one per dropped citation
};

// SUBTASK:/INSIGHTS: reply. Citations resolve by id against `catalog`;
// unknown ids are dropped with a warning. Throws ParseError without a
// non-empty SUBTASK line.
PlanResponse parse_plan_response(std::string_view text, const std::vector<memory::Insight>& catalog);

class Planner {
public:
    explicit Planner(llm::CompletionClient& client,
                     const llm::TemplateStore& templates = llm::TemplateStore::builtin());

    PlanDirective propose_subtask(const TaskSpec& task, const memory::Strategy& strategy,
                                  const std::vector<memory::Insight>& insights, const std::vector<StepRecord>& history,
                                  const std::vector<std::string>& completed);

    PlanDirective refine_subtask(const TaskSpec& task, const memory::Strategy& strategy, const PlanDirective& current,
                                 const std::vector<memory::Insight>& insights,
                                 const std::vector<StepRecord>& history);

    // Directives issued so far by this planner.
    int steps() const { return steps_; }

private:
    PlanDirective ask(const std::string& prompt, const std::vector<memory::Insight>& insights, PlanOrigin origin);

    llm::CompletionClient& client_;
    const llm::TemplateStore& templates_;
    int steps_ = 0;
};

}  // namespace stepwise::agent
