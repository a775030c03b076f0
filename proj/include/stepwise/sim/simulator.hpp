#pragma once

#include "stepwise/env/environment.hpp"
#include "stepwise/sim/world.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace stepwise::sim {

// Location codes: [0, rooms) is a room, [rooms, rooms + objects) is a
// container object, plus the two sentinels below.
inline constexpr int kInventory = -1;
inline constexpr int kGone = -2;

// Mutable episode state. Plain value so the linter can copy and hash it.
struct WorldState {
    int agent_room = 0;
    std::vector<int> location;
    std::vector<char> open;
    std::vector<char> active;
    std::vector<char> door_open;
    std::vector<char> focused;
    std::vector<char> mixed;
    std::vector<std::pair<int, int>> used;       // (tool, target or -1), sorted
    std::vector<std::pair<int, int>> connected;  // (a, b) with a < b, sorted
    std::vector<std::optional<int>> measured_min;
    std::vector<std::optional<int>> measured_max;
    std::vector<char> goal_done;
    int score = 0;
    int time = 0;
    bool ended = false;
    bool fatal = false;

    // Canonical byte string of everything that affects future behaviour.
    std::string key() const;

    bool operator==(const WorldState&) const = default;
};

WorldState initial_state(const WorldDefinition& world, std::int64_t variation);

// Object index chosen for each placement-varying object, in definition order.
std::vector<int> placement_of(const WorldDefinition& world, const WorldState& state);

// Applies one action. Awards subgoal points on first satisfaction, ends the
// episode on task completion, and turns an illegal focus into a fatal outcome.
// Throws EnvironmentError if the episode already ended.
StepOutcome apply_action(const WorldDefinition& world, WorldState& state, const ActionCommand& action);

// Resolves an object phrase against objects accessible from the agent's room:
// the longest object name contained in the phrase wins; failing that, the
// shortest name that contains the phrase. Ties go to definition order.
std::optional<int> resolve_object(const WorldDefinition& world, const WorldState& state,
                                  std::string_view phrase);

bool is_accessible(const WorldDefinition& world, const WorldState& state, int object);

bool atom_holds(const WorldDefinition& world, const WorldState& state, const Atom& atom);

std::string describe_room(const WorldDefinition& world, const WorldState& state);

// Worlds keyed by task id.
class TaskLibrary {
public:
    TaskLibrary() = default;
    explicit TaskLibrary(std::vector<World> worlds);

    // Loads every *.json world document in `dir`.
    static TaskLibrary load_directory(const std::string& dir);
    // The bundled task documents shipped with the project.
    static const TaskLibrary& bundled();

    void add(World world);
    const World& get(const std::string& task_id) const;
    bool contains(const std::string& task_id) const { return worlds_.count(task_id) != 0; }
    std::vector<std::string> task_ids() const;

private:
    std::map<std::string, World> worlds_;
};

std::string bundled_data_dir();

class Simulator final : public Environment {
public:
    explicit Simulator(TaskLibrary library);

    std::string reset(const std::string& task_id, std::int64_t variation) override;
    StepOutcome step(const ActionCommand& action) override;

    // Grammar match plus object resolution against the active world; object
    // phrases that resolve are replaced by canonical object names.
    ActionCommand parse_action(std::string_view text) const;

    const WorldState& state() const;
    const WorldDefinition& world() const;

private:
    TaskLibrary library_;
    World world_;
    std::optional<WorldState> state_;
};

}  // namespace stepwise::sim
