#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stepwise {

// One row of the environment's action table. Two-object verbs join their
// objects with `separator` ("connect OBJ to OBJ").
struct VerbSpec {
    std::string_view name;
    int min_args;
    int max_args;
    std::string_view separator;
    std::string_view description;
};

// The 25 environment actions.
std::span<const VerbSpec> verb_table();

const VerbSpec* find_verb(std::string_view name);

// A parsed action. Object references are kept as free text; the environment
// resolves them.
struct ActionCommand {
    std::string verb;
    std::vector<std::string> arguments;
    std::string raw;

    // Canonical text form, e.g. "pour jug into sink".
    std::string text() const;

    bool operator==(const ActionCommand&) const = default;
};

// Lowercase, trim, and collapse internal whitespace runs to one space.
std::string normalize_action_text(std::string_view text);

// Grammar match against the verb table. Throws ParseError naming the
// offending token (unknown verb, or an arity mismatch).
ActionCommand parse_action_text(std::string_view text);

// Up to `limit` verb names closest to `token` by edit distance.
std::vector<std::string> nearest_verbs(std::string_view token, std::size_t limit = 3);

}  // namespace stepwise
