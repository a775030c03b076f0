#include "stepwise/bench/commands.hpp"
#include "stepwise/env/protocol.hpp"
#include "stepwise/errors.hpp"
#include "stepwise/sim/simulator.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <iostream>

namespace fs = std::filesystem;

int main(int argc, char** argv) {
    // stdout carries command output and, for serve-sim, the protocol.
    spdlog::set_default_logger(spdlog::stderr_color_mt("stepwise"));
    spdlog::set_level(spdlog::level::warn);

    CLI::App app{"Stepwise planning agent: benchmark runner, reports and trace replay"};
    app.require_subcommand(1);
    bool verbose = false;
    app.add_flag("-v,--verbose", verbose, "Log progress to stderr");

    auto* run = app.add_subcommand("run", "Run the tasks listed in a manifest");
    fs::path manifest;
    std::optional<fs::path> run_out;
    run->add_option("--manifest", manifest, "Run manifest (JSON)")->required()->check(CLI::ExistingFile);
    run->add_option("--out", run_out, "Output directory; overrides the manifest");

    auto* report = app.add_subcommand("report", "Summarise results into S, L and All means");
    std::vector<fs::path> inputs;
    std::string format = "table";
    std::optional<fs::path> report_out;
    report->add_option("--in", inputs, "Run directory or results.json (repeatable)")->required();
    report->add_option("--format", format, "table or csv")->check(CLI::IsMember({"table", "csv"}));
    report->add_option("--out", report_out, "Directory for the report file and score curves");

    auto* replay = app.add_subcommand("replay", "Re-execute a recorded trace and check it step by step");
    fs::path trace;
    std::optional<fs::path> worlds;
    std::optional<std::int64_t> seed;
    replay->add_option("--trace", trace, "Trace file")->required()->check(CLI::ExistingFile);
    replay->add_option("--worlds", worlds, "World directory (default: bundled worlds)");
    replay->add_option("--seed", seed, "Replay at this variation instead of the recorded one");

    auto* serve = app.add_subcommand("serve-sim", "Serve the simulator over the line protocol on stdin/stdout");
    std::optional<fs::path> serve_worlds;
    serve->add_option("--worlds", serve_worlds, "World directory (default: bundled worlds)");

    auto* lint = app.add_subcommand("lint", "Validate world documents");
    std::vector<fs::path> documents;
    lint->add_option("documents", documents, "World files")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Usage errors share the invalid-input exit status.
        return app.exit(e) == 0 ? 0 : 2;
    }
    if (verbose) spdlog::set_level(spdlog::level::info);

    try {
        if (*run) return stepwise::bench::cmd_run(manifest, run_out, std::cout, std::cerr);
        if (*report) {
            const auto fmt = format == "csv" ? stepwise::bench::ReportFormat::Csv : stepwise::bench::ReportFormat::Table;
            return stepwise::bench::cmd_report(inputs, fmt, report_out, std::cout, std::cerr);
        }
        if (*replay) return stepwise::bench::cmd_replay(trace, worlds, seed, std::cout, std::cerr);
        if (*serve) {
            auto library = serve_worlds ? stepwise::sim::TaskLibrary::load_directory(serve_worlds->string())
                                        : stepwise::sim::TaskLibrary::bundled();
            stepwise::sim::Simulator simulator(std::move(library));
            std::ios::sync_with_stdio(false);
            stepwise::serve_environment(simulator, std::cin, std::cout);
            return 0;
        }
        if (*lint) {
            int status = 0;
            for (const auto& doc : documents) {
                try {
                    const auto world = stepwise::sim::load_world_file(doc.string());
                    std::cout << doc.string() << ": ok (" << world->goals.size() << " subgoals)\n";
                } catch (const stepwise::LintError& e) {
                    status = 1;
                    std::cout << doc.string() << ":\n";
                    for (const auto& issue : e.issues()) std::cout << "  " << issue << '\n';
                }
            }
            return status;
        }
    } catch (const stepwise::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
