#pragma once

#include <stdexcept>
#include <string>

namespace mgs {

// All recoverable failures (malformed traces, bad config values, infeasible
// requests) surface as Error. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace mgs
