#include "stepwise/bench/manifest.hpp"

#include "stepwise/errors.hpp"
#include "stepwise/sim/simulator.hpp"

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace stepwise::bench {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& issues) {
    std::string out = "invalid manifest:";
    for (const auto& i : issues) out += "\n  - " + i;
    return out;
}

fs::path resolve(const fs::path& base, const std::string& p) {
    if (p.empty()) return {};
    const fs::path path(p);
    return path.is_absolute() ? path : (base / path).lexically_normal();
}

template <typename T>
std::optional<T> field(const json& j, const char* key, std::vector<std::string>& issues, const std::string& where) {
    if (!j.contains(key)) return std::nullopt;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        issues.push_back(where + "\"" + key + "\" has the wrong type");
        return std::nullopt;
    }
}

}  // namespace

RunManifest parse_manifest(const std::string& text, const fs::path& base_dir) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("manifest is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("manifest must be a JSON object");

    std::vector<std::string> issues;
    RunManifest m;
    m.config.attempts = field<int>(doc, "attempts", issues, "").value_or(5);
    m.config.max_sub_steps = field<int>(doc, "max_sub_steps", issues, "").value_or(8);
    m.config.deliberation_cap = field<int>(doc, "deliberation_cap", issues, "").value_or(3);
    m.jobs = field<int>(doc, "jobs", issues, "").value_or(1);
    if (m.config.attempts < 1) issues.push_back("attempts must be at least 1");
    if (m.config.max_sub_steps < 1) issues.push_back("max_sub_steps must be at least 1");
    if (m.config.deliberation_cap < 1) issues.push_back("deliberation_cap must be at least 1");
    if (m.jobs < 1) issues.push_back("jobs must be at least 1");
    if (doc.contains("ablation")) {
        const auto& a = doc.at("ablation");
        m.config.planner_off = field<bool>(a, "planner_off", issues, "ablation.").value_or(false);
        m.config.evaluator_off = field<bool>(a, "evaluator_off", issues, "ablation.").value_or(false);
    }
    m.out = resolve(base_dir, field<std::string>(doc, "out", issues, "").value_or(""));
    m.worlds_dir = resolve(base_dir, field<std::string>(doc, "worlds_dir", issues, "").value_or(""));

    if (!doc.contains("backend") || !doc.at("backend").is_object()) {
        issues.push_back("missing backend section");
    } else {
        const auto& b = doc.at("backend");
        const std::string kind = field<std::string>(b, "kind", issues, "backend.").value_or("");
        if (kind == "scripted") {
            m.backend.kind = BackendKind::Scripted;
        } else if (kind == "replay") {
            m.backend.kind = BackendKind::Replay;
            m.backend.journal_dir = resolve(base_dir, field<std::string>(b, "journal_dir", issues, "backend.").value_or(""));
            m.backend.strict = field<bool>(b, "strict", issues, "backend.").value_or(true);
            if (m.backend.journal_dir.empty()) issues.push_back("replay backend needs journal_dir");
        } else if (kind == "http") {
            m.backend.kind = BackendKind::Http;
            auto& h = m.backend.http;
            h.endpoint = field<std::string>(b, "endpoint", issues, "backend.").value_or("");
            h.model = field<std::string>(b, "model", issues, "backend.").value_or("");
            h.api_key_env = field<std::string>(b, "api_key_env", issues, "backend.").value_or("");
            h.max_attempts = field<int>(b, "max_attempts", issues, "backend.").value_or(3);
            m.backend.temperature = field<double>(b, "temperature", issues, "backend.").value_or(0.0);
            if (h.endpoint.rfind("http://", 0) != 0 && h.endpoint.rfind("https://", 0) != 0) {
                issues.push_back("http backend needs an http:// or https:// endpoint");
            }
            if (h.model.empty()) issues.push_back("http backend needs a model");
            if (h.max_attempts < 1) issues.push_back("backend.max_attempts must be at least 1");
            if (b.contains("roles")) {
                for (const auto& [role, spec] : b.at("roles").items()) {
                    try {
                        const llm::Role r = llm::role_from_string(role);
                        m.backend.role_models[r] = spec.at("model").get<std::string>();
                    } catch (const std::exception& e) {
                        issues.push_back("backend.roles." + role + ": " + e.what());
                    }
                }
            }
        } else {
            issues.push_back("backend.kind must be scripted, replay or http (got \"" + kind + "\")");
        }
    }

    if (doc.contains("environment")) {
        const auto& e = doc.at("environment");
        const std::string kind = field<std::string>(e, "kind", issues, "environment.").value_or("sim");
        if (kind == "subprocess") {
            m.environment.command =
                field<std::vector<std::string>>(e, "command", issues, "environment.").value_or(std::vector<std::string>{});
            if (m.environment.command.empty()) issues.push_back("subprocess environment needs a command");
        } else if (kind != "sim") {
            issues.push_back("environment.kind must be sim or subprocess");
        }
    }

    if (!doc.contains("tasks") || !doc.at("tasks").is_array() || doc.at("tasks").empty()) {
        issues.push_back("tasks must be a non-empty list");
    } else {
        int n = 0;
        for (const auto& t : doc.at("tasks")) {
            const std::string where = "tasks[" + std::to_string(n++) + "].";
            ManifestTask task;
            task.task_id = field<std::string>(t, "task_id", issues, where).value_or("");
            if (task.task_id.empty()) issues.push_back(where + "task_id is required");
            if (const auto kind = field<std::string>(t, "kind", issues, where)) {
                try {
                    task.kind = task_kind_from_string(*kind);
                } catch (const Error& e) {
                    issues.push_back(where + e.what());
                }
            }
            task.description = field<std::string>(t, "description", issues, where);
            if (const auto v = field<std::vector<std::int64_t>>(t, "variations", issues, where)) {
                task.variations = *v;
                if (task.variations.empty()) issues.push_back(where + "variations must not be empty");
            }
            task.script = resolve(base_dir, field<std::string>(t, "script", issues, where).value_or(""));
            task.memory_seed = resolve(base_dir, field<std::string>(t, "memory_seed", issues, where).value_or(""));
            if (m.backend.kind == BackendKind::Scripted && task.script.empty()) {
                issues.push_back(where + "scripted backend needs a script");
            }
            m.tasks.push_back(std::move(task));
        }
    }
    if (!issues.empty()) throw ConfigError(join(issues));
    return m;
}

RunManifest load_manifest(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open manifest " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_manifest(buf.str(), path.parent_path());
}

void validate_manifest(const RunManifest& manifest) {
    std::vector<std::string> issues;
    std::optional<sim::TaskLibrary> library;
    try {
        library = manifest.worlds_dir.empty() ? sim::TaskLibrary::bundled()
                                              : sim::TaskLibrary::load_directory(manifest.worlds_dir.string());
    } catch (const Error& e) {
        issues.push_back(std::string("task library: ") + e.what());
    }
    const bool simulated = manifest.environment.command.empty();
    for (const auto& t : manifest.tasks) {
        if (simulated && library && !library->contains(t.task_id)) {
            issues.push_back("unknown task \"" + t.task_id + "\"");
        }
        if (!simulated && !t.description) issues.push_back("task \"" + t.task_id + "\" needs a description");
        if (!simulated && !t.kind) issues.push_back("task \"" + t.task_id + "\" needs a kind");
        if (manifest.backend.kind == BackendKind::Scripted) {
            try {
                llm::ScriptedScript::load(t.script.string());
            } catch (const Error& e) {
                issues.push_back("script for \"" + t.task_id + "\": " + e.what());
            }
        }
        if (!t.memory_seed.empty() && !fs::is_regular_file(t.memory_seed)) {
            issues.push_back("memory seed not found: " + t.memory_seed.string());
        }
        if (manifest.backend.kind == BackendKind::Replay) {
            for (const auto v : t.variations) {
                const fs::path j = manifest.backend.journal_dir / t.task_id / std::to_string(v) / "journal.jsonl";
                if (!fs::is_regular_file(j)) issues.push_back("replay journal not found: " + j.string());
            }
        }
    }
    if (manifest.backend.kind == BackendKind::Http && !manifest.backend.http.api_key_env.empty()) {
        const char* key = std::getenv(manifest.backend.http.api_key_env.c_str());
        if (key == nullptr || *key == '\0') {
            issues.push_back("environment variable " + manifest.backend.http.api_key_env + " is not set");
        }
    }
    if (manifest.out.empty()) issues.push_back("no output directory (set \"out\" or pass --out)");
    if (!issues.empty()) throw ConfigError(join(issues));
}

}  // namespace stepwise::bench
