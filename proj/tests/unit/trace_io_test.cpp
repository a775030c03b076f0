#include "fixtures.hpp"

#include "stepwise/agent/trace_io.hpp"
#include "stepwise/errors.hpp"

#include <gtest/gtest.h>

#include <filesystem>

namespace stepwise::agent {
namespace {

TEST(TraceIo, FixtureTracesRoundTrip) {
    for (const auto& f : stepwise::testing::fixture_corpus()) {
        const auto run = stepwise::testing::run_fixture(f);
        for (const auto& a : run.result.attempts) {
            const std::string text = serialize_trace(a.trace);
            const TrialTrace back = parse_trace(text);
            EXPECT_EQ(back, a.trace) << f.name;
            EXPECT_EQ(serialize_trace(back), text) << f.name;
        }
    }
}

TEST(TraceIo, FileRoundTripAndLayout) {
    const auto run = stepwise::testing::run_fixture(stepwise::testing::fixture("golden"));
    const auto root = std::filesystem::temp_directory_path() / "stepwise_trace_io";
    const auto path = trace_path(root, "temp-measure", 0, 1);
    EXPECT_EQ(path, root / "temp-measure" / "0" / "attempt_1.trace");
    write_trace(run.result.attempts[0].trace, path);
    EXPECT_EQ(read_trace(path), run.result.attempts[0].trace);
    std::filesystem::remove_all(root);
}

TEST(TraceIo, RejectsGapsAndGarbage) {
    const auto run = stepwise::testing::run_fixture(stepwise::testing::fixture("planner-off"));
    TrialTrace t = run.result.attempts[0].trace;
    t.steps[1].index = 5;
    EXPECT_THROW(parse_trace(serialize_trace(t)), ParseError);
    EXPECT_THROW(parse_trace("{not json"), ParseError);
}

}  // namespace
}  // namespace stepwise::agent
