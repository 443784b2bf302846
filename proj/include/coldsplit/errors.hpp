#pragma once

#include <stdexcept>
#include <string>

namespace coldsplit {

// Bad scenario file, preset name, or parameter path. CLI maps this to exit code 1.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Integration blew up or a numerical contract was violated. CLI maps this to exit code 2.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace coldsplit
