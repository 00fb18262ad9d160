#pragma once

#include <stdexcept>
#include <string>

namespace slsim {

/// Bad user input: invalid process parameters, malformed config files,
/// snapshot constraint violations. Maps to exit code 2 in the CLI.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A broken simulator invariant (e.g. warm-assigning a terminated
/// instance). Never caused by user input; a run hitting this must abort.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace slsim
