#include "stepwise/actions.hpp"

#include "stepwise/errors.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>

namespace stepwise {

namespace {

constexpr std::array<VerbSpec, 25> kVerbs{{
    {"open", 1, 1, "", "open a container"},
    {"close", 1, 1, "", "close a container"},
    {"activate", 1, 1, "", "activate a device"},
    {"deactivate", 1, 1, "", "deactivate a device"},
    {"connect", 2, 2, "to", "connect electrical components"},
    {"disconnect", 1, 1, "", "disconnect electrical components"},
    {"use", 1, 2, "on", "use a device/item"},
    {"look around", 0, 0, "", "describe the current room"},
    {"look at", 1, 1, "", "describe an object in detail"},
    {"look in", 1, 1, "", "describe a container's contents"},
    {"read", 1, 1, "", "read a note or book"},
    {"move", 2, 2, "to", "move an object to a container"},
    {"pick up", 1, 1, "", "move an object to the inventory"},
    {"put down", 1, 1, "", "drop an inventory item"},
    {"pour", 2, 2, "into", "pour a liquid into a container"},
    {"dunk", 2, 2, "into", "dunk a container into a liquid"},
    {"mix", 1, 1, "", "chemically mix a container"},
    {"go to", 1, 1, "", "move to a new location"},
    {"teleport to", 1, 1, "", "teleport to a specific room"},
    {"eat", 1, 1, "", "eat a food"},
    {"flush", 1, 1, "", "flush a toilet"},
    {"focus on", 1, 1, "", "signal intent on a task object"},
    {"wait", 0, 1, "", "take no action for some duration"},
    {"task", 0, 0, "", "describe current task"},
    {"inventory", 0, 0, "", "list agent's inventory"},
}};

struct Alias {
    std::string_view spelling;
    std::string_view verb;
};

// Short spellings seen in environment transcripts ("go hallway").
constexpr std::array<Alias, 3> kAliases{{
    {"go", "go to"},
    {"teleport", "teleport to"},
    {"look", "look around"},
}};

bool has_word_prefix(std::string_view text, std::string_view prefix) {
    if (text.size() < prefix.size() || text.substr(0, prefix.size()) != prefix) return false;
    return text.size() == prefix.size() || text[prefix.size()] == ' ';
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t up = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
            diag = up;
        }
    }
    return row[b.size()];
}

std::string first_token(std::string_view text) {
    const auto space = text.find(' ');
    return std::string(text.substr(0, space));
}

}  // namespace

std::span<const VerbSpec> verb_table() { return kVerbs; }

const VerbSpec* find_verb(std::string_view name) {
    for (const auto& v : kVerbs) {
        if (v.name == name) return &v;
    }
    return nullptr;
}

std::string ActionCommand::text() const {
    std::string out = verb;
    const VerbSpec* spec = find_verb(verb);
    for (std::size_t i = 0; i < arguments.size(); ++i) {
        if (i == 1 && spec != nullptr && !spec->separator.empty()) {
            out += ' ';
            out += spec->separator;
        }
        out += ' ';
        out += arguments[i];
    }
    return out;
}

std::string normalize_action_text(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out += ' ';
        pending_space = false;
        out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

std::vector<std::string> nearest_verbs(std::string_view token, std::size_t limit) {
    std::vector<std::pair<std::size_t, std::string_view>> scored;
    for (const auto& v : kVerbs) {
        const auto head = std::string_view(v.name).substr(0, v.name.find(' '));
        scored.emplace_back(std::min(edit_distance(token, v.name), edit_distance(token, head)), v.name);
    }
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::string> out;
    for (std::size_t i = 0; i < scored.size() && i < limit; ++i) out.emplace_back(scored[i].second);
    return out;
}

ActionCommand parse_action_text(std::string_view input) {
    const std::string text = normalize_action_text(input);
    if (text.empty()) throw ParseError("empty action");

    const VerbSpec* spec = nullptr;
    std::size_t matched = 0;
    for (const auto& v : kVerbs) {
        if (v.name.size() > matched && has_word_prefix(text, v.name)) {
            spec = &v;
            matched = v.name.size();
        }
    }
    if (spec == nullptr) {
        for (const auto& a : kAliases) {
            if (has_word_prefix(text, a.spelling)) {
                spec = find_verb(a.verb);
                matched = a.spelling.size();
                break;
            }
        }
    }
    if (spec == nullptr) {
        const std::string token = first_token(text);
        std::string msg = "unknown verb \"" + token + "\"; nearest verbs:";
        for (const auto& n : nearest_verbs(token)) msg += " \"" + n + "\"";
        throw ParseError(msg);
    }

    ActionCommand cmd;
    cmd.verb = std::string(spec->name);
    cmd.raw = text;
    const std::string rest = matched < text.size() ? text.substr(matched + 1) : std::string();

    if (spec->max_args == 0) {
        if (!rest.empty()) throw ParseError(cmd.verb + " takes no arguments, got \"" + rest + "\"");
        return cmd;
    }
    if (cmd.verb == "wait") {
        if (rest.empty()) return cmd;
        int duration = 0;
        const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), duration);
        if (ec != std::errc() || ptr != rest.data() + rest.size() || duration <= 0) {
            throw ParseError("wait expects a positive duration, got \"" + rest + "\"");
        }
        cmd.arguments.push_back(rest);
        return cmd;
    }
    if (rest.empty()) throw ParseError(cmd.verb + " requires an object");

    if (spec->max_args == 2) {
        const std::string sep = " " + std::string(spec->separator) + " ";
        const auto at = rest.find(sep);
        if (at == std::string::npos) {
            if (spec->min_args == 2) throw ParseError(cmd.verb + " requires two objects");
            cmd.arguments.push_back(rest);
            return cmd;
        }
        std::string first = rest.substr(0, at);
        std::string second = rest.substr(at + sep.size());
        if (first.empty() || second.empty()) throw ParseError(cmd.verb + " requires two objects");
        cmd.arguments.push_back(std::move(first));
        cmd.arguments.push_back(std::move(second));
        return cmd;
    }
    cmd.arguments.push_back(rest);
    return cmd;
}

}  // namespace stepwise
