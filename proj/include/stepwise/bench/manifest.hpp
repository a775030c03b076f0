#pragma once

#include "stepwise/llm/backend.hpp"
#include "stepwise/llm/http_backend.hpp"
#include "stepwise/types.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace stepwise::bench {

enum class BackendKind { Scripted, Replay, Http };

struct BackendConfig {
    BackendKind kind = BackendKind::Scripted;
    // replay: directory of an earlier run; journals are read per task and variation.
    std::filesystem::path journal_dir;
    bool strict = true;
    // http: shared settings plus per-role model overrides.
    llm::HttpChatConfig http;
    std::map<llm::Role, std::string> role_models;
    double temperature = 0.0;
};

struct EnvironmentConfig {
    // Empty command: the bundled simulator. Otherwise a process that speaks
    // the line protocol.
    std::vector<std::string> command;
};

struct ManifestTask {
    std::string task_id;
    std::optional<TaskKind> kind;
    std::optional<std::string> description;
    std::vector<std::int64_t> variations{0};
    std::filesystem::path script;       // scripted backend responses
    std::filesystem::path memory_seed;  // optional starting memory
};

struct RunManifest {
    std::vector<ManifestTask> tasks;
    RunConfig config;
    BackendConfig backend;
    EnvironmentConfig environment;
    std::filesystem::path out;
    std::filesystem::path worlds_dir;  // empty: bundled worlds
    int jobs = 1;
};

// Relative paths resolve against `base_dir`. Throws ConfigError listing
// every problem found in the document itself.
RunManifest parse_manifest(const std::string& text, const std::filesystem::path& base_dir);
RunManifest load_manifest(const std::filesystem::path& path);

// Checks that need the file system or the process environment: task ids,
// scripts, seeds, journals, API key variable. Throws ConfigError listing
// every problem.
void validate_manifest(const RunManifest& manifest);

}  // namespace stepwise::bench
