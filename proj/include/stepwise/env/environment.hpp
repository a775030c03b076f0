#pragma once

#include "stepwise/types.hpp"

#include <cstdint>
#include <string>

namespace stepwise {

// reset/step surface shared by the in-process simulator and external bridges.
class Environment {
public:
    virtual ~Environment() = default;

    // Starts a fresh episode; returns the task description observation.
    virtual std::string reset(const std::string& task_id, std::int64_t variation) = 0;

    virtual StepOutcome step(const ActionCommand& action) = 0;
};

}  // namespace stepwise
