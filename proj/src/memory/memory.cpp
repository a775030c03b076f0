#include "stepwise/memory/memory.hpp"

#include "stepwise/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>

namespace stepwise::memory {

using ojson = nlohmann::ordered_json;

std::string_view to_string(Polarity p) {
    switch (p) {
        case Polarity::Necessary: return "necessary";
        case Polarity::MayContribute: return "may_contribute";
        case Polarity::MayNotContribute: return "may_not_contribute";
    }
    return "necessary";
}

std::string_view to_string(Confidence c) {
    switch (c) {
        case Confidence::May: return "may";
        case Confidence::Should: return "should";
        case Confidence::Necessary: return "necessary";
    }
    return "may";
}

Polarity polarity_from_string(std::string_view text) {
    for (Polarity p : {Polarity::Necessary, Polarity::MayContribute, Polarity::MayNotContribute}) {
        if (to_string(p) == text) return p;
    }
    throw ParseError("unknown polarity \"" + std::string(text) + "\"");
}

Confidence confidence_from_string(std::string_view text) {
    for (Confidence c : {Confidence::May, Confidence::Should, Confidence::Necessary}) {
        if (to_string(c) == text) return c;
    }
    throw ParseError("unknown confidence \"" + std::string(text) + "\"");
}

std::string Insight::text() const {
    switch (polarity) {
        case Polarity::Necessary:
            switch (confidence) {
                case Confidence::Necessary: return antecedent + " is necessary for " + consequent;
                case Confidence::Should: return antecedent + " should be necessary for " + consequent;
                case Confidence::May: return antecedent + " may be necessary for " + consequent;
            }
            break;
        case Polarity::MayContribute:
            switch (confidence) {
                case Confidence::Necessary: return antecedent + " does contribute to " + consequent;
                case Confidence::Should: return antecedent + " should contribute to " + consequent;
                case Confidence::May: return antecedent + " may contribute to " + consequent;
            }
            break;
        case Polarity::MayNotContribute:
            switch (confidence) {
                case Confidence::Necessary: return antecedent + " does not contribute to " + consequent;
                case Confidence::Should: return antecedent + " should not contribute to " + consequent;
                case Confidence::May: return antecedent + " may not contribute to " + consequent;
            }
            break;
    }
    return antecedent + " " + consequent;
}

const Insight* MemoryStore::find(int id) const {
    for (const auto& i : insights) {
        if (i.id == id) return &i;
    }
    return nullptr;
}

int MemoryStore::next_id() const {
    int top = 0;
    for (const auto& i : insights) top = std::max(top, i.id);
    return top + 1;
}

std::string normalize_phrase(std::string_view text) {
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

std::vector<Insight> merge_insights(const std::vector<Insight>& old, const std::vector<Insight>& fresh) {
    std::vector<Insight> out;
    std::map<std::pair<std::string, std::string>, std::size_t> by_pair;
    std::map<int, bool> used_ids;
    int top_id = 0;
    for (const auto& i : old) top_id = std::max(top_id, i.id);

    auto fold = [&](const Insight& in, bool from_old) {
        auto key = std::make_pair(normalize_phrase(in.antecedent), normalize_phrase(in.consequent));
        const auto it = by_pair.find(key);
        if (it == by_pair.end()) {
            Insight copy = in;
            if (!from_old || used_ids.count(copy.id) > 0) copy.id = ++top_id;
            top_id = std::max(top_id, copy.id);
            used_ids[copy.id] = true;
            by_pair.emplace(std::move(key), out.size());
            out.push_back(std::move(copy));
            return;
        }
        Insight& held = out[it->second];
        if (held.polarity == in.polarity) {
            held.source_attempt = std::max(held.source_attempt, in.source_attempt);
        } else if (in.source_attempt > held.source_attempt) {
            const int id = held.id;
            held = in;
            held.id = id;
        }
    };

    for (const auto& i : old) fold(i, true);
    for (const auto& i : fresh) fold(i, false);
    return out;
}

std::vector<NegativeRule> extract_negative_rules(const MemoryStore& store) {
    std::vector<NegativeRule> rules;
    for (const auto& i : store.insights) {
        if (i.polarity != Polarity::MayNotContribute) continue;
        rules.push_back({i.id, i.antecedent, i.consequent, i.antecedent + " does NOT contribute to " + i.consequent});
    }
    return rules;
}

std::optional<Insight> parse_insight_sentence(std::string_view sentence) {
    static const std::regex negative(R"(^(.+?)\s+(does not|doesn't|may not|should not)\s+contribute\s+to\s+(.+?)\.?$)",
                                     std::regex::icase);
    static const std::regex positive(R"(^(.+?)\s+(may|should|does)\s+contribute\s+to\s+(.+?)\.?$)", std::regex::icase);
    static const std::regex needed(R"(^(.+?)\s+(is|may be|should be)\s+necessary\s+(?:for|to)\s+(.+?)\.?$)",
                                   std::regex::icase);

    const std::string text = [&] {
        std::string s(sentence);
        const auto first = s.find_first_not_of(" \t");
        const auto last = s.find_last_not_of(" \t\r\n");
        return first == std::string::npos ? std::string() : s.substr(first, last - first + 1);
    }();

    std::smatch m;
    Insight insight;
    if (std::regex_match(text, m, negative)) {
        insight.polarity = Polarity::MayNotContribute;
        const std::string hedge = normalize_phrase(m[2].str());
        insight.confidence = hedge == "may not" ? Confidence::May
                             : hedge == "should not" ? Confidence::Should
                                                     : Confidence::Necessary;
    } else if (std::regex_match(text, m, positive)) {
        insight.polarity = Polarity::MayContribute;
        const std::string hedge = normalize_phrase(m[2].str());
        insight.confidence = hedge == "may" ? Confidence::May
                             : hedge == "should" ? Confidence::Should
                                                 : Confidence::Necessary;
    } else if (std::regex_match(text, m, needed)) {
        insight.polarity = Polarity::Necessary;
        const std::string hedge = normalize_phrase(m[2].str());
        insight.confidence = hedge == "may be" ? Confidence::May
                             : hedge == "should be" ? Confidence::Should
                                                    : Confidence::Necessary;
    } else {
        return std::nullopt;
    }
    insight.antecedent = m[1].str();
    insight.consequent = m[3].str();
    return insight;
}

std::string render_insights(const std::vector<Insight>& insights, std::string_view empty_text) {
    if (insights.empty()) return std::string(empty_text);
    std::string out;
    for (const auto& i : insights) {
        if (!out.empty()) out += '\n';
        out += "[" + std::to_string(i.id) + "] " + i.text();
    }
    return out;
}

std::string render_rules(const std::vector<NegativeRule>& rules) {
    if (rules.empty()) return "(no rules)";
    std::string out;
    for (const auto& r : rules) {
        if (!out.empty()) out += '\n';
        out += "[" + std::to_string(r.id) + "] " + r.text;
    }
    return out;
}

std::string render_strategy(const Strategy& strategy) {
    if (strategy.empty()) return "(no prior strategy)";
    std::string out;
    for (std::size_t i = 0; i < strategy.milestones.size(); ++i) {
        if (i > 0) out += '\n';
        out += std::to_string(i + 1) + ". " + strategy.milestones[i].text;
    }
    return out;
}

std::string serialize_memory(const MemoryStore& store) {
    ojson doc;
    doc["version"] = kMemorySchemaVersion;
    doc["task_id"] = store.task_id;
    doc["attempt_count"] = store.attempt_count;
    doc["insights"] = ojson::array();
    for (const auto& i : store.insights) {
        ojson e;
        e["id"] = i.id;
        e["antecedent"] = i.antecedent;
        e["consequent"] = i.consequent;
        e["polarity"] = to_string(i.polarity);
        e["confidence"] = to_string(i.confidence);
        e["source_attempt"] = i.source_attempt;
        doc["insights"].push_back(std::move(e));
    }
    ojson strategy;
    strategy["milestones"] = ojson::array();
    for (const auto& m : store.strategy.milestones) {
        ojson e;
        e["text"] = m.text;
        e["steps"] = m.steps;
        strategy["milestones"].push_back(std::move(e));
    }
    strategy["source_attempt"] = store.strategy.source_attempt;
    strategy["raw_summary"] = store.strategy.raw_summary;
    doc["strategy"] = std::move(strategy);
    return doc.dump(2) + "\n";
}

MemoryStore parse_memory(std::string_view text, const std::string& task_id) {
    if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
        MemoryStore empty;
        empty.task_id = task_id;
        return empty;
    }
    ojson doc;
    try {
        doc = ojson::parse(text);
    } catch (const ojson::exception& e) {
        throw ParseError(std::string("memory file is not valid JSON: ") + e.what());
    }
    const int version = doc.value("version", -1);
    if (version != kMemorySchemaVersion) {
        throw MigrationError("memory schema version " + std::to_string(version) + " is not supported (expected " +
                             std::to_string(kMemorySchemaVersion) + ")");
    }
    try {
        MemoryStore store;
        store.task_id = doc.at("task_id").get<std::string>();
        if (!task_id.empty() && store.task_id != task_id) {
            throw ParseError("memory file belongs to task \"" + store.task_id + "\", not \"" + task_id + "\"");
        }
        store.attempt_count = doc.at("attempt_count").get<int>();
        for (const auto& e : doc.at("insights")) {
            Insight i;
            i.id = e.at("id").get<int>();
            i.antecedent = e.at("antecedent").get<std::string>();
            i.consequent = e.at("consequent").get<std::string>();
            i.polarity = polarity_from_string(e.at("polarity").get<std::string>());
            i.confidence = confidence_from_string(e.at("confidence").get<std::string>());
            i.source_attempt = e.at("source_attempt").get<int>();
            store.insights.push_back(std::move(i));
        }
        const auto& s = doc.at("strategy");
        for (const auto& e : s.at("milestones")) {
            store.strategy.milestones.push_back({e.at("text").get<std::string>(), e.at("steps").get<std::vector<int>>()});
        }
        store.strategy.source_attempt = s.at("source_attempt").get<int>();
        store.strategy.raw_summary = s.value("raw_summary", std::string());
        return store;
    } catch (const ojson::exception& e) {
        throw ParseError(std::string("malformed memory file: ") + e.what());
    }
}

void save_memory(const MemoryStore& store, const std::string& path) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path temp = target;
    temp += ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write memory file " + temp.string());
        out << serialize_memory(store);
        out.flush();
        if (!out) throw Error("failed writing memory file " + temp.string());
    }
    fs::rename(temp, target);
}

MemoryStore load_memory(const std::string& path, const std::string& task_id) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open memory file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_memory(buf.str(), task_id);
}

}  // namespace stepwise::memory
