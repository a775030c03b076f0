#include "stepwise/bench/replay.hpp"

#include "stepwise/agent/evaluator.hpp"
#include "stepwise/agent/orchestrator.hpp"
#include "stepwise/errors.hpp"

namespace stepwise::bench {

namespace {

ReplayReport diverged(int index, std::string message, int checked) {
    return {false, index, "step " + std::to_string(index) + ": " + std::move(message), checked};
}

// The candidate sits on a line of its own; history lines carry a "> " prefix.
bool names_candidate(const std::string& prompt, const std::string& action) {
    std::size_t start = 0;
    while (start <= prompt.size()) {
        auto end = prompt.find('\n', start);
        if (end == std::string::npos) end = prompt.size();
        std::string_view line(prompt.data() + start, end - start);
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
        while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
        if (line == action) return true;
        start = end + 1;
    }
    return false;
}

std::optional<std::string> pairing_problem(const StepRecord& s, const llm::PromptJournal* journal) {
    switch (s.approval) {
        case Approval::Approved:
        case Approval::FailOpen:
            if (s.verdict_id < 0) return "approved step has no verdict id";
            break;
        case Approval::ForceExecute:
            if (s.verdict_id < 0 || s.rejections < 1) return "forced step lacks a rejecting verdict";
            break;
        case Approval::Ungated:
            if (s.verdict_id != -1) return "ungated step carries a verdict id";
            break;
        case Approval::InvalidOutput:
            if (s.observation != agent::kInvalidActionObservation) return "invalid-output step has a real observation";
            break;
    }
    if (journal == nullptr || s.approval != Approval::Approved) return std::nullopt;
    for (const auto& e : journal->entries()) {
        if (e.role != llm::Role::Evaluator || e.invocation != s.verdict_id) continue;
        if (!names_candidate(e.prompt, s.action.text())) return "verdict was issued for a different action";
        try {
            if (!agent::parse_verdict(e.response, s.action, {}).approved) return "verdict did not approve the action";
        } catch (const ParseError&) {
            return "verdict reply does not parse";
        }
        return std::nullopt;
    }
    return "verdict " + std::to_string(s.verdict_id) + " is not in the journal";
}

}  // namespace

ReplayReport replay_trace(const TrialTrace& trace, const sim::TaskLibrary& library, const llm::PromptJournal* journal,
                          std::optional<std::int64_t> seed_override) {
    sim::Simulator simulator(library);
    try {
        simulator.reset(trace.task_id, seed_override.value_or(trace.variation));
    } catch (const Error& e) {
        return {false, 0, std::string("cannot reset: ") + e.what(), 0};
    }
    int checked = 0;
    int score = 0;
    for (const auto& s : trace.steps) {
        if (const auto problem = pairing_problem(s, journal)) return diverged(s.index, *problem, checked);
        StepOutcome expected{s.observation, s.reward, s.terminal, s.fatal};
        StepOutcome got;
        if (s.approval == Approval::InvalidOutput) {
            got = {std::string(agent::kInvalidActionObservation), score, false, false};
        } else {
            try {
                got = simulator.step(s.action);
            } catch (const Error& e) {
                return diverged(s.index, std::string("simulator refused the action: ") + e.what(), checked);
            }
        }
        if (got.observation != expected.observation) {
            return diverged(s.index, "observation differs; recorded \"" + expected.observation + "\", replayed \"" +
                                         got.observation + "\"", checked);
        }
        if (got.score != expected.score) {
            return diverged(s.index, "score differs; recorded " + std::to_string(expected.score) + ", replayed " +
                                         std::to_string(got.score), checked);
        }
        if (got.terminal != expected.terminal || got.fatal != expected.fatal) {
            return diverged(s.index, "terminal or fatal flag differs", checked);
        }
        score = got.score;
        ++checked;
    }
    return {true, std::nullopt, "valid (" + std::to_string(checked) + " steps)", checked};
}

}  // namespace stepwise::bench
