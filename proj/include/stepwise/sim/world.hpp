#pragma once

#include "stepwise/types.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace stepwise::sim {

struct Room {
    std::string name;
    std::string description;
};

struct Connection {
    std::string a;
    std::string b;
    bool door = true;
    bool open = true;
};

struct ObjectDef {
    std::string name;
    std::string key;  // normalized name used for matching
    std::string description;
    // Legal initial locations: room names or container object names. The
    // first entry is the canonical (variation 0) placement.
    std::vector<std::string> placements;

    bool portable = false;
    bool container = false;
    bool openable = false;
    bool open = true;
    bool device = false;
    bool active = false;
    bool heat_source = false;
    int heat_to = 0;
    bool edible = false;
    bool liquid = false;
    bool flushable = false;
    bool electrical = false;
    bool thermometer = false;
    int temperature = 20;
    std::string text;
};

enum class AtomKind { AgentIn, Holding, Focused, Used, Active, Open, Inside, Measured, Connected, Mixed };

// One condition over world state or latched history. Object references are
// normalized keys.
struct Atom {
    AtomKind kind = AtomKind::Focused;
    std::string subject;
    std::string target;  // second object / room / container, when the atom needs one
    std::optional<int> above;
    std::optional<int> below;

    bool operator==(const Atom&) const = default;
};

struct Subgoal {
    std::string id;
    std::string description;
    int points = 0;
    bool required = true;
    std::vector<Atom> all_of;

    bool operator==(const Subgoal&) const = default;
};

struct WorldDefinition {
    std::string task_id;
    std::string description;
    TaskKind kind = TaskKind::Short;
    std::string start_room;
    bool teleport_enabled = false;
    std::vector<Room> rooms;
    std::vector<Connection> connections;
    std::vector<ObjectDef> objects;
    std::vector<Subgoal> goals;  // required goals are satisfied in listed order
    std::vector<std::string> focus_whitelist;  // object keys

    int room_index(std::string_view name) const;
    int object_index(std::string_view name) const;
    TaskSpec task_spec(std::int64_t variation = 0) const;
};

using World = std::shared_ptr<const WorldDefinition>;

// Parses a world document without linting. Throws ParseError on shape errors.
WorldDefinition parse_world(const nlohmann::json& doc);

// Every lint finding: point sum, dangling references, and required-subgoal
// reachability within the step budget (breadth-first search over the action
// graph restricted to goal-relevant objects).
std::vector<std::string> lint_world(const WorldDefinition& world);

// parse_world + lint_world; throws LintError listing every finding.
World load_world(const nlohmann::json& doc);
World load_world_file(const std::string& path);

}  // namespace stepwise::sim
