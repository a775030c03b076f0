#include "stepwise/llm/backend.hpp"

#include "stepwise/errors.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace stepwise::llm {

using nlohmann::json;

namespace {

std::size_t slot(Role role) { return static_cast<std::size_t>(role); }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw BackendError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string rstrip_newlines(std::string text) {
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r' || text.back() == ' ')) text.pop_back();
    return text;
}

}  // namespace

std::string_view to_string(Role role) {
    switch (role) {
        case Role::Planner: return "planner";
        case Role::Executor: return "executor";
        case Role::Evaluator: return "evaluator";
        case Role::Memory: return "memory";
    }
    return "planner";
}

Role role_from_string(std::string_view text) {
    for (Role r : kAllRoles) {
        if (to_string(r) == text) return r;
    }
    throw ParseError("unknown role \"" + std::string(text) + "\"");
}

void ScriptedScript::add(Role role, std::string response, int repeat) {
    for (int i = 0; i < repeat; ++i) entries_[{role, counts_[slot(role)]++}] = response;
}

const std::string* ScriptedScript::find(Role role, int invocation) const {
    const auto it = entries_.find({role, invocation});
    return it == entries_.end() ? nullptr : &it->second;
}

int ScriptedScript::size(Role role) const { return counts_[slot(role)]; }

ScriptedScript ScriptedScript::parse(std::string_view text) {
    ScriptedScript script;
    std::optional<Role> role;
    int repeat = 1;
    std::string body;
    auto flush = [&] {
        if (role) script.add(*role, rstrip_newlines(body), repeat);
        body.clear();
    };

    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty() && line.front() == '#') continue;
        if (!line.empty() && line.front() == '@') {
            flush();
            std::string header = line.substr(1);
            repeat = 1;
            if (const auto space = header.find(' '); space != std::string::npos) {
                std::string count = header.substr(space + 1);
                header.resize(space);
                if (count.size() < 2 || count.front() != 'x') {
                    throw ParseError("script line " + std::to_string(line_no) + ": bad repeat \"" + count + "\"");
                }
                const auto [p, ec] = std::from_chars(count.data() + 1, count.data() + count.size(), repeat);
                if (ec != std::errc() || p != count.data() + count.size() || repeat < 1) {
                    throw ParseError("script line " + std::to_string(line_no) + ": bad repeat \"" + count + "\"");
                }
            }
            role = role_from_string(header);
            continue;
        }
        if (!role) {
            if (line.empty()) continue;
            throw ParseError("script line " + std::to_string(line_no) + ": text before the first @role header");
        }
        body += line;
        body += '\n';
    }
    flush();
    return script;
}

ScriptedScript ScriptedScript::load(const std::string& path) { return parse(read_file(path)); }

ScriptedBackend::ScriptedBackend(ScriptedScript script) : script_(std::move(script)) {}

std::string ScriptedBackend::complete(const CompletionRequest& request) {
    const std::string* response = script_.find(request.role, request.invocation);
    if (response == nullptr) {
        throw ScriptExhausted("script exhausted: no " + std::string(to_string(request.role)) + " response #" +
                              std::to_string(request.invocation) + " (script holds " +
                              std::to_string(script_.size(request.role)) + ")");
    }
    return *response;
}

bool JournalEntry::operator==(const JournalEntry& o) const {
    const bool raw_equal = raw.has_value() == o.raw.has_value() &&
                           (!raw || (raw->request_body == o.raw->request_body &&
                                     raw->response_body == o.raw->response_body));
    return role == o.role && attempt == o.attempt && step == o.step && invocation == o.invocation &&
           prompt == o.prompt && response == o.response && raw_equal;
}

void PromptJournal::append(JournalEntry entry) { entries_.push_back(std::move(entry)); }

std::vector<JournalEntry> PromptJournal::for_role(Role role) const {
    std::vector<JournalEntry> out;
    for (const auto& e : entries_) {
        if (e.role == role) out.push_back(e);
    }
    return out;
}

std::string PromptJournal::to_jsonl() const {
    std::string out;
    for (const auto& e : entries_) {
        nlohmann::ordered_json j;
        j["role"] = to_string(e.role);
        j["attempt"] = e.attempt;
        j["step"] = e.step;
        j["invocation"] = e.invocation;
        j["prompt"] = e.prompt;
        j["response"] = e.response;
        if (e.raw) {
            j["request_body"] = e.raw->request_body;
            j["response_body"] = e.raw->response_body;
        }
        out += j.dump();
        out += '\n';
    }
    return out;
}

PromptJournal PromptJournal::from_jsonl(std::string_view text) {
    PromptJournal journal;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            const auto j = json::parse(line);
            JournalEntry e;
            e.role = role_from_string(j.at("role").get<std::string>());
            e.attempt = j.at("attempt").get<int>();
            e.step = j.at("step").get<int>();
            e.invocation = j.at("invocation").get<int>();
            e.prompt = j.at("prompt").get<std::string>();
            e.response = j.at("response").get<std::string>();
            if (j.contains("request_body")) {
                e.raw = RawExchange{j.at("request_body").get<std::string>(), j.at("response_body").get<std::string>()};
            }
            journal.append(std::move(e));
        } catch (const json::exception& ex) {
            throw ParseError("journal line " + std::to_string(line_no) + ": " + ex.what());
        }
    }
    return journal;
}

void PromptJournal::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw BackendError("cannot write journal " + path);
    out << to_jsonl();
}

PromptJournal PromptJournal::load(const std::string& path) { return from_jsonl(read_file(path)); }

ReplayBackend::ReplayBackend(const PromptJournal& journal, bool strict) : strict_(strict) {
    for (const auto& e : journal.entries()) entries_[{e.role, e.invocation}] = e;
}

std::string ReplayBackend::complete(const CompletionRequest& request) {
    const auto it = entries_.find({request.role, request.invocation});
    if (it == entries_.end()) {
        throw BackendError("replay journal has no " + std::string(to_string(request.role)) + " entry #" +
                           std::to_string(request.invocation));
    }
    if (strict_ && it->second.prompt != request.prompt) {
        throw BackendError("replay divergence: " + std::string(to_string(request.role)) + " prompt #" +
                           std::to_string(request.invocation) + " differs from the journal");
    }
    return it->second.response;
}

BackendSet BackendSet::uniform(std::shared_ptr<CompletionBackend> backend) {
    BackendSet set;
    set.by_role.fill(std::move(backend));
    return set;
}

CompletionBackend& BackendSet::operator[](Role role) const {
    const auto& b = by_role[slot(role)];
    if (!b) throw ConfigError("no backend configured for role " + std::string(to_string(role)));
    return *b;
}

void BackendSet::set(Role role, std::shared_ptr<CompletionBackend> backend) { by_role[slot(role)] = std::move(backend); }

bool BackendSet::complete_set() const {
    for (const auto& b : by_role) {
        if (!b) return false;
    }
    return true;
}

CompletionClient::CompletionClient(BackendSet backends, PromptJournal* journal)
    : backends_(std::move(backends)), journal_(journal) {
    if (!backends_.complete_set()) throw ConfigError("backend set must resolve all four roles");
}

void CompletionClient::set_coordinates(int attempt, int step) {
    attempt_ = attempt;
    step_ = step;
}

std::string CompletionClient::complete(Role role, const std::string& prompt) {
    if (prompt.empty()) throw ContractViolation("completion prompt must not be empty");
    CompletionRequest request;
    request.role = role;
    request.prompt = prompt;
    request.max_tokens = max_tokens;
    request.temperature = temperature;
    request.attempt = attempt_;
    request.step = step_;
    request.invocation = invocations_[slot(role)]++;

    CompletionBackend& backend = backends_[role];
    std::string response = backend.complete(request);
    if (journal_ != nullptr) {
        journal_->append({role, attempt_, step_, request.invocation, prompt, response, backend.last_exchange()});
    }
    return response;
}

int CompletionClient::invocations(Role role) const { return invocations_[slot(role)]; }

}  // namespace stepwise::llm
