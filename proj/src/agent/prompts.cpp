#include "stepwise/agent/prompts.hpp"

#include <cctype>
#include <sstream>

namespace stepwise::agent {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

bool starts_with_icase(std::string_view s, std::string_view prefix) {
    if (s.size() < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (std::toupper(static_cast<unsigned char>(s[i])) != std::toupper(static_cast<unsigned char>(prefix[i]))) {
            return false;
        }
    }
    return true;
}

}  // namespace

std::string render_history(std::span<const StepRecord> steps, std::optional<std::size_t> max_pairs) {
    if (steps.empty()) return "(no actions yet)";
    std::size_t first = 0;
    std::string out;
    if (max_pairs && steps.size() > *max_pairs) {
        first = steps.size() - *max_pairs;
        out = "(" + std::to_string(first) + " earlier steps omitted)\n";
    }
    for (std::size_t i = first; i < steps.size(); ++i) {
        if (i > first) out += '\n';
        out += "> " + steps[i].action.text() + "\n" + steps[i].observation;
    }
    return out;
}

std::string render_completed(const std::vector<std::string>& completed) {
    if (completed.empty()) return "(none yet)";
    std::string out;
    for (std::size_t i = 0; i < completed.size(); ++i) {
        if (i > 0) out += '\n';
        out += std::to_string(i + 1) + ". " + completed[i];
    }
    return out;
}

std::string render_action_table() {
    std::string out;
    for (const auto& v : verb_table()) {
        if (!out.empty()) out += '\n';
        std::string usage(v.name);
        if (v.max_args >= 1) usage += v.min_args >= 1 ? " OBJ" : " [N]";
        if (v.max_args == 2) {
            usage += v.min_args == 2 ? " " + std::string(v.separator) + " OBJ"
                                     : " [" + std::string(v.separator) + " OBJ]";
        }
        out += usage + ": " + std::string(v.description);
    }
    return out;
}

std::optional<std::string> labeled_value(std::string_view text, std::string_view label) {
    std::istringstream in{std::string(text)};
    std::string line;
    const std::string prefix = std::string(label) + ":";
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (starts_with_icase(t, prefix)) return trim(std::string_view(t).substr(prefix.size()));
    }
    return std::nullopt;
}

}  // namespace stepwise::agent
