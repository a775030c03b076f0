#include "properties.hpp"

#include <gtest/gtest.h>

namespace stepwise::testing {
namespace {

std::string listing(const Sweep& s) {
    std::string out;
    for (const auto& v : s.violations) out += v + "\n";
    return out;
}

TEST(ScoreProperty, RandomSequencesAreMonotoneAndMatchTheOracle) {
    const Sweep s = score_sweep(1000, 0xacce55);
    EXPECT_TRUE(s.ok()) << listing(s);
    EXPECT_EQ(s.cases, 1000);
    EXPECT_GT(s.counters.at("fatal"), 0);
    EXPECT_GT(s.counters.at("budget"), 0);
    EXPECT_GT(s.counters.at("scored"), 0);
}

TEST(ScoreProperty, OracleOnHandPickedSequences) {
    auto at = [](int s, bool t = false, bool f = false) { return StepOutcome{"", s, t, f}; };
    EXPECT_EQ(oracle_episode_score({at(10), at(30), at(30), at(-100, true, true)}), 30);
    EXPECT_EQ(oracle_episode_score({at(10), at(60), at(100, true)}), 100);
    EXPECT_EQ(oracle_episode_score({}), 0);
}

}  // namespace
}  // namespace stepwise::testing
