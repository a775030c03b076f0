#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace stepwise::llm {

enum class Role { Planner, Executor, Evaluator, Memory };

inline constexpr std::array<Role, 4> kAllRoles{Role::Planner, Role::Executor, Role::Evaluator, Role::Memory};

std::string_view to_string(Role role);
Role role_from_string(std::string_view text);

struct CompletionRequest {
    Role role = Role::Planner;
    std::string prompt;
    int max_tokens = 512;
    double temperature = 0.0;
    // Log coordinates: attempt k, environment step t, per-role call index.
    int attempt = 0;
    int step = 0;
    int invocation = 0;
};

// Wire bodies of one network exchange, kept for the prompt journal.
struct RawExchange {
    std::string request_body;
    std::string response_body;
};

class CompletionBackend {
public:
    virtual ~CompletionBackend() = default;

    virtual std::string complete(const CompletionRequest& request) = 0;

    // Bodies of the most recent exchange, for backends that talk to a server.
    virtual std::optional<RawExchange> last_exchange() const { return std::nullopt; }
};

// Fixed responses keyed by (role, invocation index).
class ScriptedScript {
public:
    void add(Role role, std::string response, int repeat = 1);
    const std::string* find(Role role, int invocation) const;
    int size(Role role) const;

    // Text form: each entry starts with a header line "@<role>" or
    // "@<role> xN" (N consecutive copies) and runs to the next header.
    // Lines starting with "#" are comments. Per-role indices follow file
    // order, so entries for different roles may be interleaved.
    static ScriptedScript parse(std::string_view text);
    static ScriptedScript load(const std::string& path);

private:
    std::map<std::pair<Role, int>, std::string> entries_;
    std::array<int, 4> counts_{};
};

// Deterministic table lookup. Stateless: the invocation index comes from the
// request, so one instance can serve concurrent runs.
class ScriptedBackend final : public CompletionBackend {
public:
    explicit ScriptedBackend(ScriptedScript script);

    std::string complete(const CompletionRequest& request) override;

    const ScriptedScript& script() const { return script_; }

private:
    ScriptedScript script_;
};

struct JournalEntry {
    Role role = Role::Planner;
    int attempt = 0;
    int step = 0;
    int invocation = 0;
    std::string prompt;
    std::string response;
    std::optional<RawExchange> raw;

    bool operator==(const JournalEntry&) const;
};

// One entry per complete() call, in call order.
class PromptJournal {
public:
    void append(JournalEntry entry);
    const std::vector<JournalEntry>& entries() const { return entries_; }
    std::vector<JournalEntry> for_role(Role role) const;

    // JSON lines, one entry per line.
    void save(const std::string& path) const;
    static PromptJournal load(const std::string& path);
    std::string to_jsonl() const;
    static PromptJournal from_jsonl(std::string_view text);

private:
    std::vector<JournalEntry> entries_;
};

// Serves responses recorded in a journal, in order per role. In strict mode
// the prompt must match the recorded one byte for byte.
class ReplayBackend final : public CompletionBackend {
public:
    explicit ReplayBackend(const PromptJournal& journal, bool strict = true);

    std::string complete(const CompletionRequest& request) override;

private:
    std::map<std::pair<Role, int>, JournalEntry> entries_;
    bool strict_;
};

struct BackendSet {
    std::array<std::shared_ptr<CompletionBackend>, 4> by_role;

    static BackendSet uniform(std::shared_ptr<CompletionBackend> backend);
    CompletionBackend& operator[](Role role) const;
    void set(Role role, std::shared_ptr<CompletionBackend> backend);
    bool complete_set() const;
};

// Per-run front door to the backends: stamps coordinates and invocation
// indices onto requests and journals every exchange.
class CompletionClient {
public:
    explicit CompletionClient(BackendSet backends, PromptJournal* journal = nullptr);

    void set_coordinates(int attempt, int step);
    std::string complete(Role role, const std::string& prompt);
    int invocations(Role role) const;

    double temperature = 0.0;
    int max_tokens = 512;

private:
    BackendSet backends_;
    PromptJournal* journal_;
    std::array<int, 4> invocations_{};
    int attempt_ = 0;
    int step_ = 0;
};

}  // namespace stepwise::llm
