#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace flocksim {

class FlocksimError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two bodies (agents, or an agent and an obstacle) occupy the same point or overlap.
class CollisionError : public FlocksimError {
 public:
  using FlocksimError::FlocksimError;
};

/// A state component became NaN or infinite during integration.
class NonFiniteStateError : public FlocksimError {
 public:
  NonFiniteStateError(std::size_t agent, const std::string& what)
      : FlocksimError(what), agent_(agent) {}
  std::size_t agent() const { return agent_; }

 private:
  std::size_t agent_;
};

/// Scenario rejected before running. `code()` is a stable machine-readable reason.
class ScenarioError : public FlocksimError {
 public:
  ScenarioError(std::string code, const std::string& what)
      : FlocksimError(what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

}  // namespace flocksim
