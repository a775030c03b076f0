#include "stepwise/env/protocol.hpp"

#include "stepwise/errors.hpp"

#include <nlohmann/json.hpp>

#include <cerrno>
#include <csignal>
#include <cstring>
#include <istream>
#include <ostream>
#include <sys/wait.h>
#include <unistd.h>

namespace stepwise {

using ojson = nlohmann::ordered_json;

std::string encode_reset(const std::string& task_id, std::int64_t variation) {
    return ojson{{"op", "reset"}, {"task_id", task_id}, {"variation", variation}}.dump();
}

std::string encode_step(const ActionCommand& action) {
    return ojson{{"op", "step"}, {"action", action.text()}}.dump();
}

std::string encode_close() { return ojson{{"op", "close"}}.dump(); }

std::string encode_outcome(const StepOutcome& outcome) {
    return ojson{{"observation", outcome.observation},
                 {"score", outcome.score},
                 {"terminal", outcome.terminal},
                 {"fatal", outcome.fatal}}
        .dump();
}

std::string encode_error(const std::string& message) { return ojson{{"error", message}}.dump(); }

StepOutcome decode_outcome(const std::string& line) {
    ojson j;
    try {
        j = ojson::parse(line);
    } catch (const ojson::exception& e) {
        throw EnvironmentError(std::string("unreadable environment reply: ") + e.what());
    }
    if (!j.is_object()) throw EnvironmentError("environment reply is not an object");
    if (j.contains("error")) throw EnvironmentError("environment error: " + j.at("error").dump());
    try {
        StepOutcome o{j.at("observation").get<std::string>(), j.at("score").get<int>(), j.at("terminal").get<bool>(),
                      j.at("fatal").get<bool>()};
        if (o.fatal && !o.terminal) throw EnvironmentError("protocol violation: fatal reply without terminal");
        return o;
    } catch (const ojson::exception& e) {
        throw EnvironmentError(std::string("malformed environment reply: ") + e.what());
    }
}

int serve_environment(Environment& env, std::istream& in, std::ostream& out) {
    int handled = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++handled;
        std::string reply;
        bool closing = false;
        try {
            const auto j = ojson::parse(line);
            const std::string op = j.at("op").get<std::string>();
            if (op == "reset") {
                const std::string observation =
                    env.reset(j.at("task_id").get<std::string>(), j.value("variation", std::int64_t{0}));
                reply = encode_outcome({observation, 0, false, false});
            } else if (op == "step") {
                reply = encode_outcome(env.step(parse_action_text(j.at("action").get<std::string>())));
            } else if (op == "close") {
                reply = ojson{{"ok", true}}.dump();
                closing = true;
            } else {
                reply = encode_error("unknown op \"" + op + "\"");
            }
        } catch (const std::exception& e) {
            reply = encode_error(e.what());
        }
        out << reply << '\n' << std::flush;
        if (closing) break;
    }
    return handled;
}

SubprocessEnvironment::SubprocessEnvironment(std::vector<std::string> argv) {
    if (argv.empty()) throw ConfigError("environment command is empty");
    int down[2];
    int up[2];
    if (pipe(down) != 0) throw EnvironmentError(std::string("pipe: ") + std::strerror(errno));
    if (pipe(up) != 0) {
        ::close(down[0]);
        ::close(down[1]);
        throw EnvironmentError(std::string("pipe: ") + std::strerror(errno));
    }
    std::vector<char*> args;
    for (auto& a : argv) args.push_back(a.data());
    args.push_back(nullptr);

    pid_ = fork();
    if (pid_ < 0) throw EnvironmentError(std::string("fork: ") + std::strerror(errno));
    if (pid_ == 0) {
        dup2(down[0], STDIN_FILENO);
        dup2(up[1], STDOUT_FILENO);
        ::close(down[0]);
        ::close(down[1]);
        ::close(up[0]);
        ::close(up[1]);
        execvp(args[0], args.data());
        _exit(127);
    }
    ::close(down[0]);
    ::close(up[1]);
    to_child_ = fdopen(down[1], "w");
    from_child_ = fdopen(up[0], "r");
    if (to_child_ == nullptr || from_child_ == nullptr) throw EnvironmentError("cannot open environment pipes");
}

SubprocessEnvironment::~SubprocessEnvironment() {
    try {
        close();
    } catch (...) {
    }
}

std::string SubprocessEnvironment::request(const std::string& line) {
    if (to_child_ == nullptr) throw EnvironmentError("environment process is closed");
    std::signal(SIGPIPE, SIG_IGN);
    if (std::fputs((line + "\n").c_str(), to_child_) == EOF || std::fflush(to_child_) != 0) {
        throw EnvironmentError("environment process stopped reading");
    }
    std::string reply;
    int c;
    while ((c = std::fgetc(from_child_)) != EOF && c != '\n') reply += static_cast<char>(c);
    if (c == EOF && reply.empty()) throw EnvironmentError("environment process closed its output");
    return reply;
}

std::string SubprocessEnvironment::reset(const std::string& task_id, std::int64_t variation) {
    const StepOutcome o = decode_outcome(request(encode_reset(task_id, variation)));
    if (o.observation.empty()) throw EnvironmentError("protocol violation: empty reset observation");
    return o.observation;
}

StepOutcome SubprocessEnvironment::step(const ActionCommand& action) { return decode_outcome(request(encode_step(action))); }

void SubprocessEnvironment::close() {
    if (pid_ <= 0) return;
    if (to_child_ != nullptr) {
        try {
            request(encode_close());
        } catch (const EnvironmentError&) {
        }
        std::fclose(to_child_);
        to_child_ = nullptr;
    }
    if (from_child_ != nullptr) {
        std::fclose(from_child_);
        from_child_ = nullptr;
    }
    int status = 0;
    waitpid(pid_, &status, 0);
    pid_ = -1;
}

}  // namespace stepwise
