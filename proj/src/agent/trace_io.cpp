#include "stepwise/agent/trace_io.hpp"

#include "stepwise/errors.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace stepwise::agent {

using ojson = nlohmann::ordered_json;

std::string serialize_trace(const TrialTrace& trace) {
    std::string out;
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        const StepRecord& s = trace.steps[i];
        ojson j;
        j["task"] = trace.task_id;
        j["variation"] = trace.variation;
        j["attempt"] = trace.attempt;
        j["budget"] = trace.budget;
        j["index"] = s.index;
        j["rationale"] = s.rationale;
        j["action"] = {{"verb", s.action.verb}, {"arguments", s.action.arguments}, {"raw", s.action.raw}};
        j["observation"] = s.observation;
        j["reward"] = s.reward;
        j["approval"] = to_string(s.approval);
        j["verdict_id"] = s.verdict_id;
        j["rejections"] = s.rejections;
        j["subtask"] = s.subtask;
        j["completed"] = s.completed;
        j["terminal"] = s.terminal;
        j["fatal"] = s.fatal;
        if (i + 1 == trace.steps.size()) {
            j["ended_by"] = to_string(trace.ended_by);
            j["final_completed"] = trace.completed_subtasks;
            j["final_reward"] = trace.final_reward;
        }
        out += j.dump();
        out += '\n';
    }
    return out;
}

TrialTrace parse_trace(std::string_view text) {
    TrialTrace trace;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            const auto j = ojson::parse(line);
            if (trace.steps.empty()) {
                trace.task_id = j.at("task").get<std::string>();
                trace.variation = j.at("variation").get<std::int64_t>();
                trace.attempt = j.at("attempt").get<int>();
                trace.budget = j.at("budget").get<int>();
            }
            StepRecord s;
            s.index = j.at("index").get<int>();
            if (s.index != static_cast<int>(trace.steps.size()) + 1) {
                throw ParseError("trace line " + std::to_string(line_no) + ": step index " + std::to_string(s.index) +
                                 " breaks the sequence");
            }
            s.rationale = j.at("rationale").get<std::string>();
            const auto& a = j.at("action");
            s.action.verb = a.at("verb").get<std::string>();
            s.action.arguments = a.at("arguments").get<std::vector<std::string>>();
            s.action.raw = a.at("raw").get<std::string>();
            s.observation = j.at("observation").get<std::string>();
            s.reward = j.at("reward").get<int>();
            s.approval = approval_from_string(j.at("approval").get<std::string>());
            s.verdict_id = j.at("verdict_id").get<int>();
            s.rejections = j.at("rejections").get<int>();
            s.subtask = j.at("subtask").get<std::string>();
            s.completed = j.at("completed").get<std::vector<std::string>>();
            s.terminal = j.at("terminal").get<bool>();
            s.fatal = j.at("fatal").get<bool>();
            trace.steps.push_back(std::move(s));
            if (j.contains("ended_by")) {
                trace.ended_by = end_reason_from_string(j.at("ended_by").get<std::string>());
                trace.completed_subtasks = j.at("final_completed").get<std::vector<std::string>>();
                trace.final_reward = j.at("final_reward").get<int>();
            }
        } catch (const ojson::exception& e) {
            throw ParseError("trace line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return trace;
}

void write_trace(const TrialTrace& trace, const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write trace " + path.string());
    out << serialize_trace(trace);
}

TrialTrace read_trace(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open trace " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_trace(buf.str());
}

std::filesystem::path trace_path(const std::filesystem::path& root, const std::string& task_id,
                                 std::int64_t variation, int attempt) {
    return root / task_id / std::to_string(variation) / ("attempt_" + std::to_string(attempt) + ".trace");
}

}  // namespace stepwise::agent
