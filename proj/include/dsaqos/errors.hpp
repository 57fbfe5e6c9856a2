#pragma once

#include <stdexcept>
#include <string>

namespace dsaqos {

/// A numeric routine failed to meet its residual or convergence bound.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Simulated backlog exceeded the configured guard; the instance is
/// effectively unstable (mean arrivals at or above mean service).
class InstabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Config file rejected; carries the offending line number when known.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what
                                      : what),
          line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_ = 0;
};

}  // namespace dsaqos
