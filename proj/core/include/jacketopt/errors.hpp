#pragma once

#include <stdexcept>
#include <string>

namespace jacketopt {

// Malformed input files or bad usage; the CLI maps this to exit code 1.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// An analysis failed numerically (non-convergence, singular system); CLI exit code 2.
struct SolveError : std::runtime_error {
  explicit SolveError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace jacketopt
