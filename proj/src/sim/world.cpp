#include "stepwise/sim/world.hpp"

#include "stepwise/errors.hpp"
#include "stepwise/sim/simulator.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <deque>
#include <fstream>
#include <set>
#include <unordered_set>

namespace stepwise::sim {

using nlohmann::json;

namespace {

constexpr std::size_t kLintStateCap = 400000;

std::string key_of(std::string_view name) { return normalize_action_text(name); }

template <typename T>
T get_or(const json& j, const char* field, T fallback) {
    const auto it = j.find(field);
    return it == j.end() ? fallback : it->get<T>();
}

std::string require_string(const json& j, const char* field, std::string_view where) {
    const auto it = j.find(field);
    if (it == j.end() || !it->is_string()) {
        throw ParseError(std::string(where) + ": missing string field \"" + field + "\"");
    }
    return it->get<std::string>();
}

ObjectDef parse_object(const json& j) {
    ObjectDef o;
    o.name = require_string(j, "name", "object");
    o.key = key_of(o.name);
    o.description = get_or<std::string>(j, "description", "");
    o.text = get_or<std::string>(j, "text", "");
    o.temperature = get_or<int>(j, "temperature", 20);
    o.heat_to = get_or<int>(j, "heat_to", 0);
    const auto& placements = j.at("placements");
    if (placements.is_string()) {
        o.placements.push_back(key_of(placements.get<std::string>()));
    } else {
        for (const auto& p : placements) o.placements.push_back(key_of(p.get<std::string>()));
    }
    for (const auto& flag : get_or<json>(j, "properties", json::array())) {
        const auto f = flag.get<std::string>();
        if (f == "portable") o.portable = true;
        else if (f == "container") o.container = true;
        else if (f == "openable") { o.openable = true; o.container = true; }
        else if (f == "closed") o.open = false;
        else if (f == "device") o.device = true;
        else if (f == "on") o.active = true;
        else if (f == "heat_source") { o.heat_source = true; o.device = true; o.container = true; }
        else if (f == "edible") o.edible = true;
        else if (f == "liquid") o.liquid = true;
        else if (f == "flushable") o.flushable = true;
        else if (f == "electrical") o.electrical = true;
        else if (f == "thermometer") o.thermometer = true;
        else throw ParseError("object \"" + o.name + "\": unknown property \"" + f + "\"");
    }
    return o;
}

Atom parse_atom(const json& j) {
    Atom a;
    auto take = [&](const char* field, AtomKind kind) {
        if (!j.contains(field)) return false;
        a.kind = kind;
        a.subject = key_of(j.at(field).get<std::string>());
        return true;
    };
    if (take("agent_in", AtomKind::AgentIn) || take("holding", AtomKind::Holding) ||
        take("focused", AtomKind::Focused) || take("active", AtomKind::Active) || take("open", AtomKind::Open) ||
        take("mixed", AtomKind::Mixed)) {
        return a;
    }
    if (take("used", AtomKind::Used)) {
        a.target = key_of(get_or<std::string>(j, "on", ""));
        return a;
    }
    if (take("inside", AtomKind::Inside)) {
        a.target = key_of(j.at("in").get<std::string>());
        return a;
    }
    if (take("connected", AtomKind::Connected)) {
        a.target = key_of(j.at("to").get<std::string>());
        return a;
    }
    if (take("measured", AtomKind::Measured)) {
        if (j.contains("above")) a.above = j.at("above").get<int>();
        if (j.contains("below")) a.below = j.at("below").get<int>();
        return a;
    }
    throw ParseError("unrecognized goal condition: " + j.dump());
}

Subgoal parse_goal(const json& j, bool required) {
    Subgoal g;
    g.id = require_string(j, "id", "subgoal");
    g.description = get_or<std::string>(j, "description", g.id);
    g.points = j.at("points").get<int>();
    g.required = required;
    for (const auto& atom : j.at("when")) g.all_of.push_back(parse_atom(atom));
    if (g.all_of.empty()) throw ParseError("subgoal \"" + g.id + "\" has no conditions");
    return g;
}

// Objects named anywhere in the goal program or focus whitelist, plus every
// thermometer when a goal needs a measurement.
std::set<int> goal_objects(const WorldDefinition& w) {
    std::set<int> out;
    bool measuring = false;
    for (const auto& g : w.goals) {
        for (const auto& a : g.all_of) {
            if (const int i = w.object_index(a.subject); i >= 0) out.insert(i);
            if (const int i = w.object_index(a.target); i >= 0) out.insert(i);
            measuring |= a.kind == AtomKind::Measured;
        }
    }
    for (std::size_t i = 0; measuring && i < w.objects.size(); ++i) {
        if (w.objects[i].thermometer) out.insert(static_cast<int>(i));
    }
    for (const auto& f : w.focus_whitelist) {
        if (const int i = w.object_index(f); i >= 0) out.insert(i);
    }
    return out;
}

// Candidate actions for the reachability search, restricted to objects that
// can matter for the goal program.
std::vector<ActionCommand> search_actions(const WorldDefinition& w, const WorldState& s,
                                          const std::set<int>& relevant) {
    std::vector<ActionCommand> out;
    auto add = [&](std::string verb, std::vector<std::string> args) {
        ActionCommand c;
        c.verb = std::move(verb);
        c.arguments = std::move(args);
        c.raw = c.text();
        out.push_back(std::move(c));
    };
    const auto& here = w.rooms[s.agent_room].name;
    for (std::size_t i = 0; i < w.connections.size(); ++i) {
        const auto& c = w.connections[i];
        if (c.a != here && c.b != here) continue;
        const auto& other = c.a == here ? c.b : c.a;
        if (c.door && !s.door_open[i]) add("open", {"door to " + other});
        else add("go to", {other});
    }
    const int n = static_cast<int>(w.objects.size());
    for (int i = 0; i < n; ++i) {
        const auto& o = w.objects[i];
        const bool matters = relevant.count(i) != 0;
        if ((!matters && !o.openable) || !is_accessible(w, s, i)) continue;
        if (o.openable && !s.open[i]) add("open", {o.key});
        if (!matters) continue;
        if (o.device) add(s.active[i] ? "deactivate" : "activate", {o.key});
        if (o.portable && s.location[i] != kInventory) add("pick up", {o.key});
        if (!s.focused[i] &&
            std::find(w.focus_whitelist.begin(), w.focus_whitelist.end(), o.key) != w.focus_whitelist.end()) {
            add("focus on", {o.key});
        }
        for (int j = 0; j < n; ++j) {
            if (j == i || relevant.count(j) == 0 || !is_accessible(w, s, j)) continue;
            const auto& t = w.objects[j];
            if (o.thermometer) add("use", {o.key, t.key});
            if (o.portable && t.container) add("move", {o.key, t.key});
            if (o.liquid && t.container) add("pour", {o.key, t.key});
            if (o.electrical && t.electrical && i < j) add("connect", {o.key, t.key});
        }
        if (o.container) add("mix", {o.key});
    }
    for (const auto& g : w.goals) {
        for (const auto& a : g.all_of) {
            if (a.kind != AtomKind::Used) continue;
            const int tool = w.object_index(a.subject);
            if (tool < 0 || !is_accessible(w, s, tool)) continue;
            if (a.target.empty()) {
                add("use", {a.subject});
            } else if (const int t = w.object_index(a.target); t >= 0 && is_accessible(w, s, t)) {
                add("use", {a.subject, a.target});
            }
        }
    }
    return out;
}

void lint_reachability(const WorldDefinition& w, std::vector<std::string>& issues) {
    const int budget = step_budget(w.kind);
    const auto relevant = goal_objects(w);
    std::vector<char> ever(w.goals.size(), 0);

    struct Node {
        WorldState state;
        int depth;
    };
    std::deque<Node> frontier;
    std::unordered_set<std::string> seen;
    WorldState start = initial_state(w, 0);
    seen.insert(start.key());
    frontier.push_back({std::move(start), 0});

    while (!frontier.empty()) {
        Node node = std::move(frontier.front());
        frontier.pop_front();
        if (node.depth >= budget) continue;
        for (const auto& action : search_actions(w, node.state, relevant)) {
            WorldState next = node.state;
            const StepOutcome out = apply_action(w, next, action);
            if (out.fatal) continue;
            for (std::size_t g = 0; g < w.goals.size(); ++g) ever[g] |= next.goal_done[g];
            if (out.terminal) return;
            auto key = next.key();
            if (!seen.insert(std::move(key)).second) continue;
            if (seen.size() > kLintStateCap) {
                issues.push_back("reachability search exceeded " + std::to_string(kLintStateCap) +
                                 " states without completing the task");
                return;
            }
            frontier.push_back({std::move(next), node.depth + 1});
        }
    }
    for (std::size_t g = 0; g < w.goals.size(); ++g) {
        if (w.goals[g].required && !ever[g]) {
            issues.push_back("required subgoal \"" + w.goals[g].id + "\" is unreachable within " +
                             std::to_string(budget) + " steps");
            return;
        }
    }
    issues.push_back("task cannot be completed within " + std::to_string(budget) + " steps");
}

}  // namespace

int WorldDefinition::room_index(std::string_view name) const {
    const std::string key = key_of(name);
    for (std::size_t i = 0; i < rooms.size(); ++i) {
        if (rooms[i].name == key) return static_cast<int>(i);
    }
    return -1;
}

int WorldDefinition::object_index(std::string_view name) const {
    if (name.empty()) return -1;
    const std::string key = key_of(name);
    for (std::size_t i = 0; i < objects.size(); ++i) {
        if (objects[i].key == key) return static_cast<int>(i);
    }
    return -1;
}

TaskSpec WorldDefinition::task_spec(std::int64_t variation) const {
    return TaskSpec{task_id, description, kind, variation};
}

WorldDefinition parse_world(const json& doc) {
    try {
        WorldDefinition w;
        w.task_id = require_string(doc, "task_id", "world");
        w.description = require_string(doc, "description", "world");
        w.kind = task_kind_from_string(get_or<std::string>(doc, "budget_kind", "short"));
        w.start_room = key_of(require_string(doc, "start_room", "world"));
        w.teleport_enabled = get_or<bool>(doc, "teleport", false);
        for (const auto& r : doc.at("rooms")) {
            w.rooms.push_back({key_of(require_string(r, "name", "room")), get_or<std::string>(r, "description", "")});
        }
        for (const auto& c : doc.at("connections")) {
            const auto& ends = c.at("between");
            if (ends.size() != 2) throw ParseError("connection must name exactly two rooms");
            w.connections.push_back({key_of(ends[0].get<std::string>()), key_of(ends[1].get<std::string>()),
                                     get_or<bool>(c, "door", true), get_or<bool>(c, "open", true)});
        }
        for (const auto& o : doc.at("objects")) w.objects.push_back(parse_object(o));
        const auto& program = doc.at("goal_program");
        for (const auto& g : get_or<json>(program, "required", json::array())) w.goals.push_back(parse_goal(g, true));
        for (const auto& g : get_or<json>(program, "optional", json::array())) w.goals.push_back(parse_goal(g, false));
        for (const auto& f : doc.at("focus_whitelist")) w.focus_whitelist.push_back(key_of(f.get<std::string>()));
        return w;
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed world document: ") + e.what());
    }
}

std::vector<std::string> lint_world(const WorldDefinition& w) {
    std::vector<std::string> issues;
    if (w.description.empty()) issues.push_back("task description is empty");

    std::set<std::string> names;
    for (const auto& r : w.rooms) {
        if (!names.insert(r.name).second) issues.push_back("duplicate room \"" + r.name + "\"");
    }
    if (w.room_index(w.start_room) < 0) issues.push_back("start room \"" + w.start_room + "\" is not a room");
    for (const auto& c : w.connections) {
        for (const auto* end : {&c.a, &c.b}) {
            if (w.room_index(*end) < 0) issues.push_back("connection names unknown room \"" + *end + "\"");
        }
    }
    std::set<std::string> object_keys;
    for (const auto& o : w.objects) {
        if (!object_keys.insert(o.key).second) issues.push_back("duplicate object \"" + o.name + "\"");
        if (w.room_index(o.key) >= 0) issues.push_back("object \"" + o.name + "\" shadows a room name");
        if (o.placements.empty()) issues.push_back("object \"" + o.name + "\" has no placement");
        for (const auto& p : o.placements) {
            const int obj = w.object_index(p);
            if (w.room_index(p) < 0 && (obj < 0 || !w.objects[obj].container)) {
                issues.push_back("object \"" + o.name + "\" placed in unknown location \"" + p + "\"");
            } else if (obj >= 0 && w.objects[obj].key == o.key) {
                issues.push_back("object \"" + o.name + "\" placed inside itself");
            }
        }
    }
    for (const auto& f : w.focus_whitelist) {
        if (w.object_index(f) < 0) issues.push_back("focus whitelist names unknown object \"" + f + "\"");
    }

    int total = 0;
    std::set<std::string> goal_ids;
    bool any_required = false;
    for (const auto& g : w.goals) {
        total += g.points;
        any_required |= g.required;
        if (!goal_ids.insert(g.id).second) issues.push_back("duplicate subgoal id \"" + g.id + "\"");
        if (g.points <= 0) issues.push_back("subgoal \"" + g.id + "\" has non-positive points");
        for (const auto& a : g.all_of) {
            const bool room_subject = a.kind == AtomKind::AgentIn;
            if (room_subject ? w.room_index(a.subject) < 0 : w.object_index(a.subject) < 0) {
                issues.push_back("subgoal \"" + g.id + "\" references unknown \"" + a.subject + "\"");
            }
            if (!a.target.empty() && w.object_index(a.target) < 0 &&
                !(a.kind == AtomKind::Inside && w.room_index(a.target) >= 0)) {
                issues.push_back("subgoal \"" + g.id + "\" references unknown \"" + a.target + "\"");
            }
        }
    }
    if (!any_required) issues.push_back("goal program has no required subgoal");
    if (total != 100) issues.push_back("subgoal points sum to " + std::to_string(total) + ", expected 100");

    // The search needs a structurally sound world.
    if (issues.empty()) lint_reachability(w, issues);
    return issues;
}

World load_world(const json& doc) {
    auto world = std::make_shared<WorldDefinition>(parse_world(doc));
    if (auto issues = lint_world(*world); !issues.empty()) throw LintError(std::move(issues));
    return world;
}

World load_world_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open world document " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ParseError("world document " + path + " is not valid JSON: " + e.what());
    }
    return load_world(doc);
}

}  // namespace stepwise::sim
