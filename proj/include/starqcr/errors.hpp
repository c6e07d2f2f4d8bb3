#pragma once

#include <stdexcept>
#include <string>

namespace starqcr {

// Invalid domain parameters, malformed scenario files, or unusable requests.
// The CLI maps this to exit code 2.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& message) : std::invalid_argument(message) {}
};

// A loss ratio could not be formed because its denominator is statistically
// indistinguishable from zero. The CLI maps this to exit code 1.
class InferenceError : public std::runtime_error {
public:
    explicit InferenceError(const std::string& message) : std::runtime_error(message) {}
};

}  // namespace starqcr
