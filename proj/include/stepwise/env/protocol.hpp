#pragma once

#include "stepwise/env/environment.hpp"

#include <cstdio>
#include <iosfwd>
#include <string>
#include <sys/types.h>
#include <vector>

namespace stepwise {

// Line protocol, one JSON object per line each way:
//   {"op":"reset","task_id":"t","variation":0}
//   {"op":"step","action":"go to kitchen"}
//   {"op":"close"}
// Replies: {"observation":"...","score":0,"terminal":false,"fatal":false},
// {"ok":true} for close, or {"error":"..."}.
std::string encode_reset(const std::string& task_id, std::int64_t variation);
std::string encode_step(const ActionCommand& action);
std::string encode_close();
std::string encode_outcome(const StepOutcome& outcome);
std::string encode_error(const std::string& message);

// Decodes an outcome reply. Error replies and malformed or inconsistent
// replies (fatal without terminal, missing fields) raise EnvironmentError.
StepOutcome decode_outcome(const std::string& line);

// Answers requests from `in` on `out` until close or end of input. Bad
// requests get an error reply and the loop continues. Returns the number of
// requests handled.
int serve_environment(Environment& env, std::istream& in, std::ostream& out);

// Environment behind a child process that speaks the line protocol on its
// standard streams.
class SubprocessEnvironment final : public Environment {
public:
    explicit SubprocessEnvironment(std::vector<std::string> argv);
    ~SubprocessEnvironment() override;

    SubprocessEnvironment(const SubprocessEnvironment&) = delete;
    SubprocessEnvironment& operator=(const SubprocessEnvironment&) = delete;

    std::string reset(const std::string& task_id, std::int64_t variation) override;
    StepOutcome step(const ActionCommand& action) override;

    // Sends close and waits for the child. Safe to call twice.
    void close();

    // Raw exchange, for protocol tests.
    std::string request(const std::string& line);

private:
    pid_t pid_ = -1;
    std::FILE* to_child_ = nullptr;
    std::FILE* from_child_ = nullptr;
};

}  // namespace stepwise
