#include "fixtures.hpp"

#include "stepwise/actions.hpp"
#include "stepwise/errors.hpp"

#include <stdexcept>

namespace stepwise::testing {

namespace fs = std::filesystem;

fs::path data_path(const std::string& relative) { return fs::path(STEPWISE_TEST_DATA_DIR) / relative; }

const sim::TaskLibrary& library() { return sim::TaskLibrary::bundled(); }

const std::vector<Fixture>& fixture_corpus() {
    static const std::vector<Fixture> corpus{
        {"golden", "temp-measure-golden.script", "temp-measure-seed.json", 1, false},
        {"planner-off", "temp-measure-planner-off.script", "temp-measure-seed.json", 1, true},
        {"rule-blocking", "temp-measure-rule-blocking.script", "temp-measure-negative-rule.json", 1, false},
        {"five-attempts", "temp-measure-k5.script", "", 5, false},
    };
    return corpus;
}

const Fixture& fixture(const std::string& name) {
    for (const auto& f : fixture_corpus()) {
        if (f.name == name) return f;
    }
    throw std::invalid_argument("no fixture " + name);
}

RunConfig fixture_config(const Fixture& f) {
    RunConfig config;
    config.attempts = f.attempts;
    config.planner_off = f.planner_off;
    return config;
}

namespace {

memory::MemoryStore load_seed(const Fixture& f) {
    if (f.memory_seed.empty()) return {};
    return memory::load_memory(data_path("memory/" + f.memory_seed).string(), "temp-measure");
}

TaskSpec temp_measure() { return library().get("temp-measure")->task_spec(0); }

}  // namespace

FixtureRun run_fixture(const Fixture& f) {
    FixtureRun run;
    run.seed = load_seed(f);
    const auto script = llm::ScriptedScript::load(data_path("scripts/" + f.script).string());
    sim::Simulator env(library());
    run.result = agent::run_task(temp_measure(), env,
                                 llm::BackendSet::uniform(std::make_shared<llm::ScriptedBackend>(script)),
                                 fixture_config(f), &run.journal, run.seed);
    return run;
}

agent::TaskResult replay_fixture(const Fixture& f, const llm::PromptJournal& journal) {
    sim::Simulator env(library());
    return agent::run_task(temp_measure(), env,
                           llm::BackendSet::uniform(std::make_shared<llm::ReplayBackend>(journal, true)),
                           fixture_config(f), nullptr, load_seed(f));
}

std::vector<memory::MemoryStore> memory_inputs(const FixtureRun& run) {
    std::vector<memory::MemoryStore> out;
    memory::MemoryStore current = run.seed;
    if (current.task_id.empty()) current.task_id = run.result.task.task_id;
    for (const auto& a : run.result.attempts) {
        out.push_back(current);
        current = a.memory_after;
    }
    return out;
}

CannedEnvironment::CannedEnvironment(std::vector<StepOutcome> outcomes, StepOutcome tail)
    : outcomes_(std::move(outcomes)), tail_(std::move(tail)) {}

std::string CannedEnvironment::reset(const std::string& task_id, std::int64_t) {
    steps_ = 0;
    ++resets_;
    return "task " + task_id;
}

StepOutcome CannedEnvironment::step(const ActionCommand& action) {
    actions_.push_back(action);
    const auto i = static_cast<std::size_t>(steps_++);
    return i < outcomes_.size() ? outcomes_[i] : tail_;
}

RandomBackend::RandomBackend(std::uint64_t seed, const sim::WorldDefinition& world) : rng_(seed) {
    for (const auto& o : world.objects) objects_.push_back(o.name);
    for (const auto& r : world.rooms) rooms_.push_back(r.name);
}

std::string RandomBackend::object() {
    if (rng_() % 10 == 0) return "purple unicorn";
    return objects_[rng_() % objects_.size()];
}

std::string RandomBackend::action() {
    switch (rng_() % 12) {
        case 0: return "go to " + rooms_[rng_() % rooms_.size()];
        case 1: return "look around";
        case 2: return "focus on " + object();
        case 3: return "pick up " + object();
        case 4: return "open " + object();
        case 5: return "use " + object() + " on " + object();
        case 6: return "look at " + object();
        case 7: return "move " + object() + " to " + object();
        case 8: return "wait";
        case 9: return "activate " + object();
        case 10: return "teleport to " + rooms_[rng_() % rooms_.size()];
        default: return "go to " + rooms_[rng_() % rooms_.size()];
    }
}

std::string RandomBackend::complete(const llm::CompletionRequest& request) {
    const auto roll = rng_() % 100;
    switch (request.role) {
        case llm::Role::Planner:
            if (roll < 8) return "I am not sure what to do.";
            return "SUBTASK: " + action() + " then continue\nINSIGHTS: [" + std::to_string(rng_() % 6) + "]";
        case llm::Role::Executor:
            if (roll < 10) return "THINK: hmm\nACTION: fly to the moon";
            if (roll < 15) return "no idea";
            return "THINK: try something\nACTION: " + action();
        case llm::Role::Evaluator:
            if (roll < 10) return "looks fine to me";
            if (roll < 35) return "VERDICT: REJECT\nREASON: breaks rule [" + std::to_string(rng_() % 4) + "]";
            return std::string("VERDICT: APPROVE\nDONE: ") + (rng_() % 4 == 0 ? "YES" : "NO");
        case llm::Role::Memory:
            if (roll < 15) return "nothing to report";
            if (request.prompt.find("MILESTONE") != std::string::npos) {
                return "MILESTONE: " + action() + " [steps: 1-" + std::to_string(1 + rng_() % 5) + "]";
            }
            if (request.prompt.find("ESSENTIAL") != std::string::npos) {
                return "ESSENTIAL: [" + std::to_string(1 + rng_() % 8) + "]";
            }
            return "INSIGHT: " + action() + " does not contribute to the task\nINSIGHT: going to the " +
                   rooms_[rng_() % rooms_.size()] + " may contribute to " + action();
    }
    return "";
}

memory::Insight make_insight(int id, std::string x, std::string y, memory::Polarity p, memory::Confidence c,
                             int source) {
    return memory::Insight{id, std::move(x), std::move(y), p, c, source};
}

namespace {

const std::vector<std::string> kAntecedents{
    "going to the kitchen", "Going to the  Kitchen", "focusing on the thermometer", "opening the fridge",
    "focusing on unknown substance B", " picking up the glass cup", "activating the stove", "waiting",
};
const std::vector<std::string> kConsequents{
    "the task", "finding the thermometer", "measuring the temperature", "The Task ", "boiling water",
};

template <typename T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& v) {
    return v[rng() % v.size()];
}

}  // namespace

std::vector<memory::Insight> random_insights(std::mt19937_64& rng, int max_count, int max_attempt) {
    std::vector<memory::Insight> out;
    const int n = static_cast<int>(rng() % static_cast<std::uint64_t>(max_count + 1));
    for (int i = 0; i < n; ++i) {
        out.push_back(make_insight(static_cast<int>(1 + rng() % 12), pick(rng, kAntecedents), pick(rng, kConsequents),
                                   static_cast<memory::Polarity>(rng() % 3),
                                   static_cast<memory::Confidence>(rng() % 3),
                                   static_cast<int>(rng() % static_cast<std::uint64_t>(max_attempt + 1))));
    }
    return out;
}

memory::MemoryStore random_store(std::mt19937_64& rng, const std::string& task_id) {
    memory::MemoryStore store;
    store.task_id = task_id;
    store.insights = memory::merge_insights({}, random_insights(rng, 10, 6));
    store.attempt_count = static_cast<int>(rng() % 7);
    const int milestones = static_cast<int>(rng() % 4);
    for (int i = 0; i < milestones; ++i) {
        memory::Milestone m;
        m.text = "milestone \"" + std::to_string(i) + "\"\twith\nescapes";
        for (int s = 0; s < static_cast<int>(rng() % 4); ++s) m.steps.push_back(static_cast<int>(1 + rng() % 37));
        store.strategy.milestones.push_back(std::move(m));
    }
    store.strategy.source_attempt = milestones > 0 ? static_cast<int>(rng() % 6) : 0;
    store.strategy.raw_summary = milestones > 0 ? "summary " + std::to_string(rng() % 100) : "";
    return store;
}

}  // namespace stepwise::testing
