#pragma once

#include <stdexcept>
#include <string>

namespace orbitspace {

// Configuration / input validation problems. CLI maps these to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A computation reached a state the pipeline cannot continue from
// (invalid MIB, uncovered boundary samples, unbounded potential, ...).
// CLI maps these to exit code 2.
class ComputationError : public std::runtime_error {
 public:
  explicit ComputationError(const std::string& what) : std::runtime_error(what) {}
};

class ClosureExceeded : public ComputationError {
 public:
  explicit ClosureExceeded(const std::string& what) : ComputationError(what) {}
};

class NotExpressible : public ComputationError {
 public:
  explicit NotExpressible(const std::string& what) : ComputationError(what) {}
};

class IncompleteCover : public ComputationError {
 public:
  explicit IncompleteCover(const std::string& what) : ComputationError(what) {}
};

class AllUnbounded : public ComputationError {
 public:
  explicit AllUnbounded(const std::string& what) : ComputationError(what) {}
};

}  // namespace orbitspace
