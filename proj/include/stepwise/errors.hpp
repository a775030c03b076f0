#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace stepwise {

// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Text that does not follow the expected wire or grammar format.
class ParseError : public Error {
public:
    using Error::Error;
};

// A caller broke an operation's precondition (e.g. appending to an ended trace).
class ContractViolation : public Error {
public:
    using Error::Error;
};

// A completion backend could not produce a response.
class BackendError : public Error {
public:
    using Error::Error;
};

// Scripted backend asked for an entry past the end of its script.
class ScriptExhausted : public BackendError {
public:
    using BackendError::BackendError;
};

class TemplateError : public Error {
public:
    using Error::Error;
};

// The environment violated the reset/step protocol.
class EnvironmentError : public Error {
public:
    using Error::Error;
};

// Persisted data carries a schema version this build cannot read.
class MigrationError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

// World document failed validation; `issues` lists every finding.
class LintError : public Error {
public:
    explicit LintError(std::vector<std::string> issues);

    const std::vector<std::string>& issues() const { return issues_; }

private:
    std::vector<std::string> issues_;
};

}  // namespace stepwise
