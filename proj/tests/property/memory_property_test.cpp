#include "properties.hpp"

#include <gtest/gtest.h>

namespace stepwise::testing {
namespace {

std::string listing(const Sweep& s) {
    std::string out;
    for (const auto& v : s.violations) out += v + "\n";
    return out;
}

TEST(MemoryLaws, HoldOnGeneratedStores) {
    const Sweep s = memory_sweep(600, 0x3e3);
    EXPECT_TRUE(s.ok()) << listing(s);
    EXPECT_EQ(s.cases, 600);
    // Generated inputs must exercise collisions and rules.
    EXPECT_GT(s.counters.at("merged_pairs"), 0);
    EXPECT_GT(s.counters.at("rules"), 0);
}

}  // namespace
}  // namespace stepwise::testing
