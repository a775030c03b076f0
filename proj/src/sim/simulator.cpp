#include "stepwise/sim/simulator.hpp"

#include "stepwise/errors.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <random>
#include <sstream>

namespace stepwise::sim {

namespace {

constexpr std::string_view kNotHere = "You don't see that here.";

int rooms_of(const WorldDefinition& w) { return static_cast<int>(w.rooms.size()); }

bool is_object_location(const WorldDefinition& w, int loc) { return loc >= rooms_of(w); }

int object_at(const WorldDefinition& w, int loc) { return loc - rooms_of(w); }

int location_code(const WorldDefinition& w, std::string_view name) {
    if (const int r = w.room_index(name); r >= 0) return r;
    if (const int o = w.object_index(name); o >= 0) return rooms_of(w) + o;
    throw EnvironmentError("unknown location \"" + std::string(name) + "\"");
}

// Room holding `object`, following container links; -1 for inventory or gone.
int containing_room(const WorldDefinition& w, const WorldState& s, int object) {
    int loc = s.location[object];
    for (std::size_t guard = 0; guard <= w.objects.size() && is_object_location(w, loc); ++guard) {
        loc = s.location[object_at(w, loc)];
    }
    return loc >= 0 && loc < rooms_of(w) ? loc : -1;
}

bool inside(const WorldDefinition& w, const WorldState& s, int object, int container) {
    int loc = s.location[object];
    for (std::size_t guard = 0; guard <= w.objects.size() && is_object_location(w, loc); ++guard) {
        if (object_at(w, loc) == container) return true;
        loc = s.location[object_at(w, loc)];
    }
    return false;
}

int temperature_of(const WorldDefinition& w, const WorldState& s, int object) {
    int loc = s.location[object];
    for (std::size_t guard = 0; guard <= w.objects.size() && is_object_location(w, loc); ++guard) {
        const int c = object_at(w, loc);
        if (w.objects[c].heat_source && s.active[c]) return w.objects[c].heat_to;
        loc = s.location[c];
    }
    return w.objects[object].temperature;
}

std::string article(std::string_view name) {
    if (name.empty()) return "a";
    const char c = name.front();
    return (c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u') ? "an" : "a";
}

std::vector<int> contents_of(const WorldDefinition& w, const WorldState& s, int loc) {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(w.objects.size()); ++i) {
        if (s.location[i] == loc) out.push_back(i);
    }
    return out;
}

std::string name_list(const WorldDefinition& w, const std::vector<int>& objects) {
    if (objects.empty()) return "nothing";
    std::string out;
    for (std::size_t i = 0; i < objects.size(); ++i) {
        if (i > 0) out += ", ";
        const auto& name = w.objects[objects[i]].name;
        out += article(name) + " " + name;
    }
    return out;
}

std::string render_object(const WorldDefinition& w, const WorldState& s, int object) {
    const auto& def = w.objects[object];
    std::string out = article(def.name) + " " + def.name;
    if (def.device) out += s.active[object] ? ", which is turned on" : ", which is turned off";
    if (def.container) {
        if (def.openable && !s.open[object]) {
            out += ". The " + def.name + " is closed";
        } else {
            out += " (containing " + name_list(w, contents_of(w, s, rooms_of(w) + object)) + ")";
        }
    }
    return out;
}

std::string connection_other(const Connection& c, std::string_view room) {
    return c.a == room ? c.b : c.a;
}

void sorted_insert(std::vector<std::pair<int, int>>& v, std::pair<int, int> item) {
    const auto it = std::lower_bound(v.begin(), v.end(), item);
    if (it == v.end() || *it != item) v.insert(it, item);
}

void record_measurement(WorldState& s, int object, int reading) {
    auto& lo = s.measured_min[object];
    auto& hi = s.measured_max[object];
    lo = lo ? std::min(*lo, reading) : reading;
    hi = hi ? std::max(*hi, reading) : reading;
}

// Index of the connection from the agent's room whose door the phrase names.
std::optional<int> resolve_door(const WorldDefinition& w, const WorldState& s, std::string_view phrase) {
    if (phrase.find("door") == std::string_view::npos) return std::nullopt;
    const auto& here = w.rooms[s.agent_room].name;
    std::optional<int> best;
    std::size_t best_len = 0;
    for (int i = 0; i < static_cast<int>(w.connections.size()); ++i) {
        const auto& c = w.connections[i];
        if (!c.door || (c.a != here && c.b != here)) continue;
        const std::string other = connection_other(c, here);
        if (phrase.find(other) != std::string_view::npos && other.size() > best_len) {
            best = i;
            best_len = other.size();
        }
    }
    return best;
}

std::optional<int> resolve_room(const WorldDefinition& w, std::string_view text) {
    const std::string phrase = normalize_action_text(text);
    std::optional<int> best;
    std::size_t best_len = 0;
    for (int i = 0; i < rooms_of(w); ++i) {
        const auto& name = w.rooms[i].name;
        if (phrase.find(name) != std::string::npos && name.size() > best_len) {
            best = i;
            best_len = name.size();
        }
    }
    if (best) return best;
    for (int i = 0; i < rooms_of(w); ++i) {
        if (w.rooms[i].name.find(phrase) != std::string::npos) return i;
    }
    return std::nullopt;
}

// Required goal `goal` may be satisfied only once all earlier required goals are.
bool predecessors_done(const WorldDefinition& w, const WorldState& s, std::size_t goal) {
    for (std::size_t i = 0; i < goal; ++i) {
        if (w.goals[i].required && !s.goal_done[i]) return false;
    }
    return true;
}

bool goal_holds(const WorldDefinition& w, const WorldState& s, const Subgoal& g) {
    return std::all_of(g.all_of.begin(), g.all_of.end(), [&](const Atom& a) { return atom_holds(w, s, a); });
}

// Awards points for newly satisfied subgoals; returns true when every
// required subgoal is done.
bool award_goals(const WorldDefinition& w, WorldState& s) {
    bool blocked = false;
    for (std::size_t i = 0; i < w.goals.size(); ++i) {
        const auto& g = w.goals[i];
        if (s.goal_done[i]) continue;
        if (g.required) {
            if (blocked) continue;
            if (goal_holds(w, s, g)) {
                s.goal_done[i] = 1;
                s.score += g.points;
            } else {
                blocked = true;
            }
        } else if (goal_holds(w, s, g)) {
            s.goal_done[i] = 1;
            s.score += g.points;
        }
    }
    for (std::size_t i = 0; i < w.goals.size(); ++i) {
        if (w.goals[i].required && !s.goal_done[i]) return false;
    }
    return true;
}

// Focusing is legal only on whitelisted objects whose required focus goals
// are next in line.
bool focus_is_legal(const WorldDefinition& w, const WorldState& s, int object) {
    const auto& name = w.objects[object].key;
    if (std::find(w.focus_whitelist.begin(), w.focus_whitelist.end(), name) == w.focus_whitelist.end()) {
        return false;
    }
    for (std::size_t i = 0; i < w.goals.size(); ++i) {
        const auto& g = w.goals[i];
        if (!g.required || s.goal_done[i]) continue;
        const bool targets = std::any_of(g.all_of.begin(), g.all_of.end(), [&](const Atom& a) {
            return a.kind == AtomKind::Focused && a.subject == name;
        });
        if (targets && !predecessors_done(w, s, i)) return false;
    }
    return true;
}

std::string inventory_text(const WorldDefinition& w, const WorldState& s) {
    const auto items = contents_of(w, s, kInventory);
    if (items.empty()) return "Your inventory is empty.";
    std::string out = "In your inventory, you see:";
    for (int i : items) out += "\n\t" + render_object(w, s, i);
    return out;
}

std::string look_at(const WorldDefinition& w, const WorldState& s, int object) {
    const auto& def = w.objects[object];
    std::string out = def.description.empty() ? render_object(w, s, object) : def.description;
    if (def.thermometer) {
        out += ", currently reading a temperature of " + std::to_string(temperature_of(w, s, object)) +
               " degrees celsius";
    }
    if (!def.description.empty() && (def.container || def.device)) out += ". It is " + render_object(w, s, object);
    return out;
}

struct Step {
    const WorldDefinition& w;
    WorldState& s;
    const ActionCommand& action;

    std::optional<int> object(std::size_t arg) const {
        if (arg >= action.arguments.size()) return std::nullopt;
        return resolve_object(w, s, action.arguments[arg]);
    }

    std::string run() {
        const auto& verb = action.verb;
        if (verb == "look around") return describe_room(w, s);
        if (verb == "inventory") return inventory_text(w, s);
        if (verb == "task") return w.description;
        if (verb == "wait") return wait();
        if (verb == "go to" || verb == "teleport to") return travel(verb == "teleport to");
        if (verb == "open" || verb == "close") return open_close(verb == "open");

        const auto target = object(0);
        if (!target) return std::string(kNotHere);
        const int obj = *target;
        const auto& def = w.objects[obj];

        if (verb == "look at") return look_at(w, s, obj);
        if (verb == "look in") return look_in(obj);
        if (verb == "read") return def.text.empty() ? "There is nothing written on the " + def.name + "." : def.text;
        if (verb == "activate" || verb == "deactivate") return toggle(obj, verb == "activate");
        if (verb == "pick up") return pick_up(obj);
        if (verb == "put down") return put_down(obj);
        if (verb == "eat") return eat(obj);
        if (verb == "flush") {
            return def.flushable ? "The " + def.name + " flushes." : "The " + def.name + " can't be flushed.";
        }
        if (verb == "mix") return mix(obj);
        if (verb == "focus on") return focus(obj);
        if (verb == "disconnect") return disconnect(obj);
        if (verb == "use") return use(obj);

        const auto second = object(1);
        if (!second) return std::string(kNotHere);
        if (verb == "move") return move(obj, *second, "move");
        if (verb == "pour") return pour(obj, *second);
        if (verb == "dunk") return dunk(obj, *second);
        if (verb == "connect") return connect(obj, *second);
        throw EnvironmentError("verb without semantics: " + verb);
    }

    std::string wait() {
        int duration = 1;
        if (!action.arguments.empty()) {
            const auto& a = action.arguments[0];
            std::from_chars(a.data(), a.data() + a.size(), duration);
        }
        s.time += std::max(duration, 1);
        return "Time passes.";
    }

    std::string travel(bool teleport) {
        if (action.arguments.empty()) return std::string(kNotHere);
        const auto room = resolve_room(w, action.arguments[0]);
        if (!room) return std::string(kNotHere);
        const auto& name = w.rooms[*room].name;
        if (*room == s.agent_room) return "You are already in the " + name + ".";
        if (teleport) {
            if (!w.teleport_enabled) return "Teleporting is not available in this mode.";
            s.agent_room = *room;
            return "You teleport to the " + name + ".";
        }
        const auto& here = w.rooms[s.agent_room].name;
        for (std::size_t i = 0; i < w.connections.size(); ++i) {
            const auto& c = w.connections[i];
            if (!((c.a == here && c.b == name) || (c.b == here && c.a == name))) continue;
            if (c.door && !s.door_open[i]) return "The door to the " + name + " is closed.";
            s.agent_room = *room;
            return "You move to the " + name + ".";
        }
        return "You can't go to the " + name + " from here.";
    }

    std::string open_close(bool opening) {
        if (action.arguments.empty()) return std::string(kNotHere);
        const auto& phrase = action.arguments[0];
        if (const auto obj = resolve_object(w, s, phrase)) {
            const auto& def = w.objects[*obj];
            if (!def.openable) return "The " + def.name + " can't be " + (opening ? "opened." : "closed.");
            if (static_cast<bool>(s.open[*obj]) == opening) {
                return "The " + def.name + " is already " + (opening ? "open." : "closed.");
            }
            s.open[*obj] = opening ? 1 : 0;
            return "The " + def.name + " is now " + (opening ? "open." : "closed.");
        }
        if (const auto door = resolve_door(w, s, phrase)) {
            const std::string other = connection_other(w.connections[*door], w.rooms[s.agent_room].name);
            if (static_cast<bool>(s.door_open[*door]) == opening) {
                return "The door to the " + other + " is already " + (opening ? "open." : "closed.");
            }
            s.door_open[*door] = opening ? 1 : 0;
            return "The door to the " + other + " is now " + (opening ? "open." : "closed.");
        }
        return std::string(kNotHere);
    }

    std::string look_in(int obj) {
        const auto& def = w.objects[obj];
        if (!def.container) return "The " + def.name + " is not a container.";
        if (def.openable && !s.open[obj]) return "The " + def.name + " is closed.";
        return "Inside the " + def.name + " is: " + name_list(w, contents_of(w, s, rooms_of(w) + obj)) + ".";
    }

    std::string toggle(int obj, bool on) {
        const auto& def = w.objects[obj];
        if (!def.device) return "The " + def.name + " can't be " + (on ? "activated." : "deactivated.");
        if (static_cast<bool>(s.active[obj]) == on) {
            return "The " + def.name + " is already " + (on ? "activated." : "deactivated.");
        }
        s.active[obj] = on ? 1 : 0;
        return "The " + def.name + " is now " + (on ? "activated." : "deactivated.");
    }

    std::string pick_up(int obj) {
        const auto& def = w.objects[obj];
        if (s.location[obj] == kInventory) return "You already have the " + def.name + ".";
        if (!def.portable) return "You can't pick up the " + def.name + ".";
        s.location[obj] = kInventory;
        return "You move the " + def.name + " to the inventory.";
    }

    std::string put_down(int obj) {
        const auto& def = w.objects[obj];
        if (s.location[obj] != kInventory) return "You are not holding the " + def.name + ".";
        s.location[obj] = s.agent_room;
        return "You drop the " + def.name + ".";
    }

    std::string eat(int obj) {
        const auto& def = w.objects[obj];
        if (!def.edible) return "You can't eat the " + def.name + ".";
        s.location[obj] = kGone;
        return "You eat the " + def.name + ".";
    }

    std::string mix(int obj) {
        const auto& def = w.objects[obj];
        if (!def.container) return "The " + def.name + " can't be mixed.";
        s.mixed[obj] = 1;
        return "You mix the contents of the " + def.name + ".";
    }

    std::string focus(int obj) {
        const auto& name = w.objects[obj].name;
        if (!focus_is_legal(w, s, obj)) {
            s.fatal = true;
            return "You focus on the " + name + ". That is not the right object to focus on at this point.";
        }
        s.focused[obj] = 1;
        return "You focus on the " + name + ".";
    }

    std::string use(int obj) {
        const auto& def = w.objects[obj];
        if (action.arguments.size() < 2) {
            sorted_insert(s.used, {obj, -1});
            if (def.device) return toggle(obj, !s.active[obj]);
            return "You use the " + def.name + ".";
        }
        const auto target = object(1);
        if (!target) return std::string(kNotHere);
        sorted_insert(s.used, {obj, *target});
        if (def.thermometer) {
            const int reading = temperature_of(w, s, *target);
            record_measurement(s, *target, reading);
            return "The " + def.name + " measures a temperature of " + std::to_string(reading) + " degrees celsius.";
        }
        return "You use the " + def.name + " on the " + w.objects[*target].name + ".";
    }

    std::string move(int obj, int dest, std::string_view how) {
        const auto& def = w.objects[obj];
        const auto& dst = w.objects[dest];
        if (!def.portable) return "You can't " + std::string(how) + " the " + def.name + ".";
        if (!dst.container) return "The " + dst.name + " is not a container.";
        if (dst.openable && !s.open[dest]) return "The " + dst.name + " is closed.";
        if (obj == dest || inside(w, s, dest, obj)) return "You can't put the " + def.name + " inside itself.";
        s.location[obj] = rooms_of(w) + dest;
        return "You move the " + def.name + " to the " + dst.name + ".";
    }

    std::string pour(int obj, int dest) {
        if (!w.objects[obj].liquid) return "You can't pour the " + w.objects[obj].name + ".";
        return move(obj, dest, "pour");
    }

    std::string dunk(int obj, int liquid) {
        const auto& def = w.objects[obj];
        if (!def.container) return "The " + def.name + " can't hold anything.";
        if (!w.objects[liquid].liquid) return "You can't dunk the " + def.name + " into the " + w.objects[liquid].name + ".";
        s.location[liquid] = rooms_of(w) + obj;
        return "You dunk the " + def.name + " into the " + w.objects[liquid].name + ".";
    }

    std::string connect(int a, int b) {
        if (!w.objects[a].electrical || !w.objects[b].electrical || a == b) {
            return "The " + w.objects[a].name + " can't be connected to the " + w.objects[b].name + ".";
        }
        sorted_insert(s.connected, {std::min(a, b), std::max(a, b)});
        return "The " + w.objects[a].name + " is now connected to the " + w.objects[b].name + ".";
    }

    std::string disconnect(int obj) {
        const auto before = s.connected.size();
        std::erase_if(s.connected, [&](const auto& p) { return p.first == obj || p.second == obj; });
        if (before == s.connected.size()) return "The " + w.objects[obj].name + " is not connected to anything.";
        return "The " + w.objects[obj].name + " is now disconnected.";
    }
};

}  // namespace

std::string WorldState::key() const {
    std::ostringstream out;
    out << agent_room << '|';
    for (int l : location) out << l << ',';
    out << '|';
    for (const auto* v : {&open, &active, &door_open, &focused, &mixed, &goal_done}) {
        for (char c : *v) out << (c ? '1' : '0');
        out << '|';
    }
    for (const auto& [a, b] : used) out << a << ':' << b << ',';
    out << '|';
    for (const auto& [a, b] : connected) out << a << ':' << b << ',';
    out << '|';
    for (std::size_t i = 0; i < measured_min.size(); ++i) {
        if (measured_min[i]) out << i << ':' << *measured_min[i] << ':' << *measured_max[i] << ',';
    }
    out << '|' << score << '|' << ended << fatal;
    return out.str();
}

WorldState initial_state(const WorldDefinition& w, std::int64_t variation) {
    WorldState s;
    s.agent_room = w.room_index(w.start_room);
    const std::size_t n = w.objects.size();
    s.location.resize(n);
    s.open.resize(n);
    s.active.resize(n);
    s.focused.assign(n, 0);
    s.mixed.assign(n, 0);
    s.measured_min.assign(n, std::nullopt);
    s.measured_max.assign(n, std::nullopt);
    s.goal_done.assign(w.goals.size(), 0);
    s.door_open.resize(w.connections.size());
    for (std::size_t i = 0; i < w.connections.size(); ++i) s.door_open[i] = w.connections[i].open ? 1 : 0;

    // mt19937_64 output is fixed by the standard, so placements are portable;
    // distributions are not, hence the plain modulo.
    std::mt19937_64 rng(static_cast<std::uint64_t>(variation));
    for (std::size_t i = 0; i < n; ++i) {
        const auto& def = w.objects[i];
        std::size_t pick = 0;
        if (variation != 0 && def.placements.size() > 1) pick = rng() % def.placements.size();
        s.location[i] = location_code(w, def.placements[pick]);
        s.open[i] = def.open ? 1 : 0;
        s.active[i] = def.active ? 1 : 0;
    }
    return s;
}

std::vector<int> placement_of(const WorldDefinition& w, const WorldState& s) {
    std::vector<int> out;
    for (std::size_t i = 0; i < w.objects.size(); ++i) {
        if (w.objects[i].placements.size() > 1) out.push_back(s.location[i]);
    }
    return out;
}

bool is_accessible(const WorldDefinition& w, const WorldState& s, int object) {
    int loc = s.location[object];
    for (std::size_t guard = 0; guard <= w.objects.size() && is_object_location(w, loc); ++guard) {
        const int c = object_at(w, loc);
        if (w.objects[c].openable && !s.open[c]) return false;
        loc = s.location[c];
    }
    return loc == kInventory || loc == s.agent_room;
}

std::optional<int> resolve_object(const WorldDefinition& w, const WorldState& s, std::string_view text) {
    const std::string phrase = normalize_action_text(text);
    if (phrase.empty()) return std::nullopt;
    std::optional<int> best;
    std::size_t best_len = 0;
    for (int i = 0; i < static_cast<int>(w.objects.size()); ++i) {
        const auto& name = w.objects[i].key;
        if (name.size() > best_len && phrase.find(name) != std::string::npos && is_accessible(w, s, i)) {
            best = i;
            best_len = name.size();
        }
    }
    if (best) return best;
    std::size_t shortest = std::string::npos;
    for (int i = 0; i < static_cast<int>(w.objects.size()); ++i) {
        const auto& name = w.objects[i].key;
        if (name.size() < shortest && name.find(phrase) != std::string::npos && is_accessible(w, s, i)) {
            best = i;
            shortest = name.size();
        }
    }
    return best;
}

bool atom_holds(const WorldDefinition& w, const WorldState& s, const Atom& atom) {
    const int subject = w.object_index(atom.subject);
    switch (atom.kind) {
        case AtomKind::AgentIn: return s.agent_room == w.room_index(atom.subject);
        case AtomKind::Holding: return subject >= 0 && s.location[subject] == kInventory;
        case AtomKind::Focused: return subject >= 0 && s.focused[subject];
        case AtomKind::Active: return subject >= 0 && s.active[subject];
        case AtomKind::Open: return subject >= 0 && s.open[subject];
        case AtomKind::Mixed: return subject >= 0 && s.mixed[subject];
        case AtomKind::Used: {
            const int target = atom.target.empty() ? -1 : w.object_index(atom.target);
            if (atom.target.empty()) {
                return std::any_of(s.used.begin(), s.used.end(), [&](const auto& p) { return p.first == subject; });
            }
            return std::binary_search(s.used.begin(), s.used.end(), std::pair{subject, target});
        }
        case AtomKind::Inside: {
            if (const int room = w.room_index(atom.target); room >= 0) return containing_room(w, s, subject) == room;
            return inside(w, s, subject, w.object_index(atom.target));
        }
        case AtomKind::Measured: {
            const auto& hi = s.measured_max[subject];
            const auto& lo = s.measured_min[subject];
            if (!hi) return false;
            if (atom.above && !(*hi > *atom.above)) return false;
            if (atom.below && !(*lo < *atom.below)) return false;
            return true;
        }
        case AtomKind::Connected: {
            const int t = w.object_index(atom.target);
            return std::binary_search(s.connected.begin(), s.connected.end(),
                                      std::pair{std::min(subject, t), std::max(subject, t)});
        }
    }
    return false;
}

std::string describe_room(const WorldDefinition& w, const WorldState& s) {
    const auto& here = w.rooms[s.agent_room].name;
    std::string out = "This room is called the " + here + ". In it, you see:\n\tthe agent";
    for (int i : contents_of(w, s, s.agent_room)) out += "\n\t" + render_object(w, s, i);
    out += "\nYou also see:";
    for (std::size_t i = 0; i < w.connections.size(); ++i) {
        const auto& c = w.connections[i];
        if (c.a != here && c.b != here) continue;
        const std::string other = connection_other(c, here);
        if (c.door) {
            out += "\n\tA door to the " + other + " (that is " + (s.door_open[i] ? "open" : "closed") + ")";
        } else {
            out += "\n\tA path to the " + other;
        }
    }
    return out;
}

StepOutcome apply_action(const WorldDefinition& w, WorldState& s, const ActionCommand& action) {
    if (s.ended) throw EnvironmentError("episode has ended; reset before stepping");
    StepOutcome out;
    out.observation = Step{w, s, action}.run();
    if (s.fatal) {
        s.ended = true;
        out.observation += " (Task failed: -100 points)";
        out.score = -100;
        out.terminal = true;
        out.fatal = true;
        return out;
    }
    const bool complete = award_goals(w, s);
    if (complete) {
        s.ended = true;
        out.observation += " (Task Completed!)";
        out.terminal = true;
    }
    out.score = s.score;
    return out;
}

TaskLibrary::TaskLibrary(std::vector<World> worlds) {
    for (auto& w : worlds) add(std::move(w));
}

TaskLibrary TaskLibrary::load_directory(const std::string& dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    TaskLibrary lib;
    for (const auto& f : files) lib.add(load_world_file(f.string()));
    return lib;
}

const TaskLibrary& TaskLibrary::bundled() {
    static const TaskLibrary lib = load_directory(bundled_data_dir() + "/worlds");
    return lib;
}

void TaskLibrary::add(World world) {
    auto id = world->task_id;
    worlds_[id] = std::move(world);
}

const World& TaskLibrary::get(const std::string& task_id) const {
    const auto it = worlds_.find(task_id);
    if (it == worlds_.end()) throw EnvironmentError("unknown task id \"" + task_id + "\"");
    return it->second;
}

std::vector<std::string> TaskLibrary::task_ids() const {
    std::vector<std::string> out;
    for (const auto& [id, _] : worlds_) out.push_back(id);
    return out;
}

std::string bundled_data_dir() {
    if (const char* env = std::getenv("STEPWISE_DATA_DIR"); env != nullptr && *env != '\0') return env;
    return STEPWISE_DATA_DIR;
}

Simulator::Simulator(TaskLibrary library) : library_(std::move(library)) {}

std::string Simulator::reset(const std::string& task_id, std::int64_t variation) {
    world_ = library_.get(task_id);
    state_ = initial_state(*world_, variation);
    return world_->description;
}

StepOutcome Simulator::step(const ActionCommand& action) {
    if (!state_) throw EnvironmentError("step called before reset");
    return apply_action(*world_, *state_, action);
}

ActionCommand Simulator::parse_action(std::string_view text) const {
    ActionCommand cmd = parse_action_text(text);
    if (!state_) return cmd;
    const bool rooms = cmd.verb == "go to" || cmd.verb == "teleport to";
    for (auto& arg : cmd.arguments) {
        if (cmd.verb == "wait") break;
        if (rooms) {
            if (const auto r = resolve_room(*world_, arg)) arg = world_->rooms[*r].name;
        } else if (const auto o = resolve_object(*world_, *state_, arg)) {
            arg = world_->objects[*o].name;
        }
    }
    return cmd;
}

const WorldState& Simulator::state() const {
    if (!state_) throw EnvironmentError("simulator has not been reset");
    return *state_;
}

const WorldDefinition& Simulator::world() const {
    if (!world_) throw EnvironmentError("simulator has not been reset");
    return *world_;
}

}  // namespace stepwise::sim
