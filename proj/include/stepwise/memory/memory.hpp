#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stepwise::memory {

inline constexpr int kMemorySchemaVersion = 1;

enum class Polarity { Necessary, MayContribute, MayNotContribute };
enum class Confidence { May, Should, Necessary };

std::string_view to_string(Polarity p);
std::string_view to_string(Confidence c);
Polarity polarity_from_string(std::string_view text);
Confidence confidence_from_string(std::string_view text);

// Causal abstraction "X <relation> Y" learned from an attempt.
struct Insight {
    int id = 0;
    std::string antecedent;  // X
    std::string consequent;  // Y
    Polarity polarity = Polarity::Necessary;
    Confidence confidence = Confidence::May;
    int source_attempt = 0;

    // Sentence form, e.g. "X may not contribute to Y".
    std::string text() const;

    bool operator==(const Insight&) const = default;
};

// Evaluator-facing projection of a MayNotContribute insight. Shares its id.
struct NegativeRule {
    int id = 0;
    std::string antecedent;
    std::string consequent;
    std::string text;  // "X does NOT contribute to Y"

    bool operator==(const NegativeRule&) const = default;
};

struct Milestone {
    std::string text;
    std::vector<int> steps;  // trace step indices the milestone summarises

    bool operator==(const Milestone&) const = default;
};

struct Strategy {
    std::vector<Milestone> milestones;
    int source_attempt = 0;
    std::string raw_summary;

    bool empty() const { return milestones.empty(); }
    bool operator==(const Strategy&) const = default;
};

struct MemoryStore {
    std::string task_id;
    std::vector<Insight> insights;
    Strategy strategy;
    int attempt_count = 0;

    const Insight* find(int id) const;
    int next_id() const;

    bool operator==(const MemoryStore&) const = default;
};

// Lowercase, trimmed, internal whitespace collapsed to single spaces.
std::string normalize_phrase(std::string_view text);

// Union of `old` and `fresh`, one entry per normalized (X, Y).
//  - same (X, Y, polarity): the earlier entry stays and its source_attempt
//    becomes the larger of the two;
//  - same (X, Y), other polarity: a strictly newer source_attempt replaces
//    the entry in place, keeping its id;
//  - otherwise the entry is appended; fresh entries get the id after the
//    largest one in use, so merging the same batch twice adds nothing.
// Order is stable with old entries first.
std::vector<Insight> merge_insights(const std::vector<Insight>& old, const std::vector<Insight>& fresh);

// MayNotContribute insights as rules, in store order.
std::vector<NegativeRule> extract_negative_rules(const MemoryStore& store);

// Reads one insight sentence; id and source_attempt are left at 0.
std::optional<Insight> parse_insight_sentence(std::string_view sentence);

// "[id] text" per line, or `empty_text` for an empty list.
std::string render_insights(const std::vector<Insight>& insights, std::string_view empty_text = "(none)");
std::string render_rules(const std::vector<NegativeRule>& rules);
// Numbered milestone list, or "(no prior strategy)".
std::string render_strategy(const Strategy& strategy);

std::string serialize_memory(const MemoryStore& store);
MemoryStore parse_memory(std::string_view text, const std::string& task_id);

// Atomic write: temporary file in the same directory, then rename.
void save_memory(const MemoryStore& store, const std::string& path);
// An empty file yields an empty store for `task_id`.
MemoryStore load_memory(const std::string& path, const std::string& task_id);

}  // namespace stepwise::memory
