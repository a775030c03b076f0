#include "stepwise/bench/commands.hpp"

#include "stepwise/agent/trace_io.hpp"
#include "stepwise/bench/replay.hpp"
#include "stepwise/bench/report.hpp"
#include "stepwise/env/protocol.hpp"
#include "stepwise/errors.hpp"
#include "stepwise/llm/http_backend.hpp"
#include "stepwise/sim/simulator.hpp"

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <ostream>
#include <thread>

namespace stepwise::bench {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
}

llm::BackendSet make_backends(const RunManifest& m, const ManifestTask& task, std::int64_t variation) {
    switch (m.backend.kind) {
        case BackendKind::Scripted:
            return llm::BackendSet::uniform(
                std::make_shared<llm::ScriptedBackend>(llm::ScriptedScript::load(task.script.string())));
        case BackendKind::Replay: {
            const auto journal = llm::PromptJournal::load(
                (m.backend.journal_dir / task.task_id / std::to_string(variation) / "journal.jsonl").string());
            return llm::BackendSet::uniform(std::make_shared<llm::ReplayBackend>(journal, m.backend.strict));
        }
        case BackendKind::Http: {
            llm::BackendSet set;
            for (llm::Role role : llm::kAllRoles) {
                llm::HttpChatConfig cfg = m.backend.http;
                if (const auto it = m.backend.role_models.find(role); it != m.backend.role_models.end()) {
                    cfg.model = it->second;
                }
                set.set(role, std::make_shared<llm::HttpChatBackend>(cfg));
            }
            return set;
        }
    }
    throw ConfigError("unknown backend kind");
}

TaskSpec make_task(const ManifestTask& t, std::int64_t variation,
                   const sim::TaskLibrary& library) {
    TaskSpec spec;
    spec.task_id = t.task_id;
    spec.variation_seed = variation;
    if (library.contains(t.task_id)) {
        const auto& world = library.get(t.task_id);
        spec.description = world->description;
        spec.kind = world->kind;
    }
    if (t.description) spec.description = *t.description;
    if (t.kind) spec.kind = *t.kind;
    if (spec.description.empty()) throw ConfigError("task \"" + t.task_id + "\" has no description");
    return spec;
}

UnitResult run_unit(const RunManifest& m, const ManifestTask& t, std::int64_t variation,
                    const sim::TaskLibrary& library) {
    UnitResult unit{t, variation, std::nullopt, {}};
    const fs::path dir = m.out / t.task_id / std::to_string(variation);
    fs::create_directories(dir);
    llm::PromptJournal journal;
    try {
        const TaskSpec spec = make_task(t, variation, library);
        std::unique_ptr<Environment> env;
        if (m.environment.command.empty()) {
            env = std::make_unique<sim::Simulator>(library);
        } else {
            env = std::make_unique<SubprocessEnvironment>(m.environment.command);
        }
        memory::MemoryStore seed;
        if (!t.memory_seed.empty()) seed = memory::load_memory(t.memory_seed.string(), t.task_id);

        llm::CompletionClient client(make_backends(m, t, variation), &journal);
        client.temperature = m.backend.temperature;
        agent::Orchestrator orchestrator(*env, client, m.config);
        agent::RunHooks hooks;
        hooks.on_attempt = [&](const agent::AttemptResult& a) {
            const int k = a.trace.attempt;
            agent::write_trace(a.trace, dir / ("attempt_" + std::to_string(k) + ".trace"));
            write_text(dir / ("curve_attempt_" + std::to_string(k) + ".tsv"), curve_tsv(a.trace));
            memory::save_memory(a.memory_after, (dir / ("memory_attempt_" + std::to_string(k) + ".json")).string());
            memory::save_memory(a.memory_after, (dir / "memory.json").string());
            journal.save((dir / "journal.jsonl").string());
        };
        unit.result = orchestrator.run_task(spec, std::move(seed), hooks);
    } catch (const Error& e) {
        unit.error = e.what();
        spdlog::error("{} variation {}: {}", t.task_id, variation, e.what());
    }
    journal.save((dir / "journal.jsonl").string());
    return unit;
}

std::string results_json(const std::vector<UnitResult>& units) {
    ojson doc;
    doc["tasks"] = ojson::array();
    for (const auto& u : units) {
        ojson t;
        t["task_id"] = u.task.task_id;
        t["variation"] = u.variation;
        if (u.result) {
            t["kind"] = u.result->task.kind == TaskKind::Short ? "S" : "L";
            t["best_score"] = u.result->best_score;
            t["episode_scores"] = u.result->episode_scores();
            t["attempts"] = ojson::array();
            for (const auto& a : u.result->attempts) {
                ojson e;
                e["attempt"] = a.trace.attempt;
                e["episode_score"] = a.episode_score;
                e["ended_by"] = to_string(a.trace.ended_by);
                e["status"] = agent::to_string(a.status);
                e["steps"] = a.trace.steps.size();
                if (!a.abort_reason.empty()) e["abort_reason"] = a.abort_reason;
                t["attempts"].push_back(std::move(e));
            }
        } else {
            t["kind"] = u.task.kind ? (*u.task.kind == TaskKind::Short ? "S" : "L") : "S";
            t["best_score"] = nullptr;
            t["error"] = u.error;
        }
        doc["tasks"].push_back(std::move(t));
    }
    return doc.dump(2) + "\n";
}

}  // namespace

std::vector<UnitResult> run_manifest(const RunManifest& manifest) {
    validate_manifest(manifest);
    const sim::TaskLibrary library = manifest.worlds_dir.empty()
                                         ? sim::TaskLibrary::bundled()
                                         : sim::TaskLibrary::load_directory(manifest.worlds_dir.string());
    std::vector<std::pair<const ManifestTask*, std::int64_t>> work;
    for (const auto& t : manifest.tasks) {
        for (const auto v : t.variations) work.emplace_back(&t, v);
    }
    std::vector<UnitResult> units(work.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < work.size(); i = next++) {
            units[i] = run_unit(manifest, *work[i].first, work[i].second, library);
        }
    };
    const int jobs = std::min<int>(manifest.jobs, static_cast<int>(work.size()));
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    write_text(manifest.out / "results.json", results_json(units));
    return units;
}

int cmd_run(const fs::path& manifest_path, const std::optional<fs::path>& out_override, std::ostream& out,
            std::ostream& err) {
    RunManifest manifest;
    try {
        manifest = load_manifest(manifest_path);
        if (out_override) manifest.out = *out_override;
        validate_manifest(manifest);
    } catch (const Error& e) {
        err << e.what() << '\n';
        return 2;
    }
    const auto units = run_manifest(manifest);
    int status = 0;
    for (const auto& u : units) {
        if (!u.result) {
            out << u.task.task_id << '/' << u.variation << ": error: " << u.error << '\n';
            status = 1;
            continue;
        }
        out << u.task.task_id << '/' << u.variation << ": best " << u.result->best_score << " (episodes";
        for (int s : u.result->episode_scores()) out << ' ' << s;
        out << ")\n";
    }
    out << "results written to " << (manifest.out / "results.json").string() << '\n';
    return status;
}

int cmd_report(const std::vector<fs::path>& inputs, ReportFormat format, const std::optional<fs::path>& out_dir,
               std::ostream& out, std::ostream& err) {
    std::vector<TaskScore> rows;
    std::vector<fs::path> traces;
    for (const auto& input : inputs) {
        const fs::path results = fs::is_directory(input) ? input / "results.json" : input;
        try {
            auto r = read_results(results);
            rows.insert(rows.end(), r.begin(), r.end());
        } catch (const Error& e) {
            err << e.what() << '\n';
            return 1;
        }
        const fs::path root = fs::is_directory(input) ? input : input.parent_path();
        if (fs::is_directory(root)) {
            for (const auto& entry : fs::recursive_directory_iterator(root)) {
                if (entry.is_regular_file() && entry.path().extension() == ".trace") traces.push_back(entry.path());
            }
        }
    }
    std::sort(traces.begin(), traces.end());
    const ReportSummary summary = summarize(std::move(rows));
    if (!summary.missing.empty()) {
        err << "warning: no result for";
        for (const auto& m : summary.missing) err << ' ' << m;
        err << "; means cover the remaining tasks\n";
    }
    const std::string text = format == ReportFormat::Table ? format_table(summary) : format_csv(summary);
    out << text;

    std::vector<std::string> flagged;
    for (const auto& path : traces) {
        try {
            const TrialTrace trace = agent::read_trace(path);
            if (suspected_shortcut(trace)) flagged.push_back(path.string());
            if (out_dir) {
                write_text(*out_dir / "curves" /
                               (trace.task_id + "_" + std::to_string(trace.variation) + "_attempt_" +
                                std::to_string(trace.attempt) + ".tsv"),
                           curve_tsv(trace));
            }
        } catch (const Error& e) {
            err << "skipping " << path.string() << ": " << e.what() << '\n';
        }
    }
    for (const auto& f : flagged) out << "suspected shortcut: " << f << '\n';
    if (out_dir) write_text(*out_dir / (format == ReportFormat::Table ? "report.txt" : "report.csv"), text);
    return 0;
}

int cmd_replay(const fs::path& trace_path, const std::optional<fs::path>& worlds_dir,
               std::optional<std::int64_t> seed_override, std::ostream& out, std::ostream& err) {
    try {
        const TrialTrace trace = agent::read_trace(trace_path);
        const sim::TaskLibrary library =
            worlds_dir ? sim::TaskLibrary::load_directory(worlds_dir->string()) : sim::TaskLibrary::bundled();
        std::optional<llm::PromptJournal> journal;
        const fs::path journal_path = trace_path.parent_path() / "journal.jsonl";
        if (fs::is_regular_file(journal_path)) journal = llm::PromptJournal::load(journal_path.string());
        const ReplayReport report = replay_trace(trace, library, journal ? &*journal : nullptr, seed_override);
        out << trace_path.string() << ": " << report.message << '\n';
        return report.valid ? 0 : 1;
    } catch (const Error& e) {
        err << e.what() << '\n';
        return 2;
    }
}

}  // namespace stepwise::bench
