#pragma once

#include "stepwise/agent/orchestrator.hpp"
#include "stepwise/bench/manifest.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace stepwise::bench {

struct UnitResult {
    ManifestTask task;
    std::int64_t variation = 0;
    std::optional<agent::TaskResult> result;
    std::string error;  // set on a fatal run error
};

// Runs every (task, variation) of a validated manifest and writes, under
// <out>/<task>/<variation>/: attempt_<k>.trace, curve_attempt_<k>.tsv,
// memory_attempt_<k>.json, memory.json and journal.jsonl; plus
// <out>/results.json.
std::vector<UnitResult> run_manifest(const RunManifest& manifest);

// Exit status 0 on success, 1 on a fatal run error, 2 on an invalid manifest.
int cmd_run(const std::filesystem::path& manifest_path, const std::optional<std::filesystem::path>& out_override,
            std::ostream& out, std::ostream& err);

enum class ReportFormat { Table, Csv };

// Reads results.json from each input (a run directory or the file itself),
// prints the report, and with `out_dir` also writes report.txt / report.csv
// and one curve file per recorded episode found in the inputs.
int cmd_report(const std::vector<std::filesystem::path>& inputs, ReportFormat format,
               const std::optional<std::filesystem::path>& out_dir, std::ostream& out, std::ostream& err);

// Validates one trace file; a journal.jsonl next to it is used for the
// verdict pairing check. Exit status 0 when valid, 1 on divergence.
int cmd_replay(const std::filesystem::path& trace_path, const std::optional<std::filesystem::path>& worlds_dir,
               std::optional<std::int64_t> seed_override, std::ostream& out, std::ostream& err);

}  // namespace stepwise::bench
