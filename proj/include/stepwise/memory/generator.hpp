#pragma once

#include "stepwise/llm/backend.hpp"
#include "stepwise/llm/templates.hpp"
#include "stepwise/memory/memory.hpp"
#include "stepwise/types.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace stepwise::memory {

// INSIGHT: lines, or "INSIGHTS: none". Throws ParseError when a line cannot
// be read as an insight or the reply holds neither form.
std::vector<Insight> parse_reflection(std::string_view text);

// "ESSENTIAL: [3, 5]" or "ESSENTIAL: none".
std::vector<int> parse_essential(std::string_view text);

// "MILESTONE: text [steps: 1, 2-4]" lines. Milestones without a step list
// are kept with no steps.
std::vector<Milestone> parse_milestones(std::string_view text);

// 1-based indices of steps whose cumulative reward strictly increased.
std::vector<int> rewarded_steps(const TrialTrace& trace);

// "N. > action\n   observation [score]" per step; `marked` steps get a "*".
std::string render_trace(const TrialTrace& trace, const std::vector<int>& marked = {});

struct GenerationReport {
    MemoryStore store;
    bool reflection_malformed = false;
    bool strategy_fallback = false;  // milestones built from rewarded actions
    std::vector<int> retained_steps;
    std::vector<std::string> warnings;
};

class MemoryGenerator {
public:
    explicit MemoryGenerator(llm::CompletionClient& client,
                             const llm::TemplateStore& templates = llm::TemplateStore::builtin());

    // Reflects on an ended trace and returns the updated store. A malformed
    // reflection returns `prior` unchanged.
    GenerationReport generate(const TaskSpec& task, const MemoryStore& prior, const TrialTrace& trace,
                              int final_reward);

private:
    Strategy abstract_strategy(const TaskSpec& task, const MemoryStore& prior, const TrialTrace& trace,
                               GenerationReport& report);

    llm::CompletionClient& client_;
    const llm::TemplateStore& templates_;
};

// Functional form of MemoryGenerator::generate.
MemoryStore generate_memory(const TaskSpec& task, const MemoryStore& prior, const TrialTrace& trace, int final_reward,
                            llm::CompletionClient& client,
                            const llm::TemplateStore& templates = llm::TemplateStore::builtin());

}  // namespace stepwise::memory
