#pragma once

#include <span>
#include <vector>

#include "flocksim/geometry.hpp"

namespace flocksim {

struct AgentState {
  Vec2 q = Vec2::Zero();
  double theta = 0.0;  ///< heading, wrapped to (-pi, pi] after every step
  double v = 0.0;      ///< linear speed
  double w = 0.0;      ///< angular speed
};

struct ControlInput {
  double u = 0.0;    ///< linear acceleration
  double tau = 0.0;  ///< angular acceleration
};

struct StateDerivative {
  Vec2 q_dot = Vec2::Zero();
  double theta_dot = 0.0;
  double v_dot = 0.0;
  double w_dot = 0.0;
};

/// Unicycle double integrator: q' = v e(theta), theta' = w, v' = u, w' = tau.
StateDerivative derivative(const AgentState& s, const ControlInput& c);

/// One classical RK4 step for a single agent with the control held constant.
/// The returned heading is wrapped; no finiteness check.
AgentState rk4_step(const AgentState& s, const ControlInput& c, double dt);

bool is_finite(const AgentState& s);

/// RK4 step of the whole group (zero-order hold). Throws std::invalid_argument on
/// bad dt or size mismatch, NonFiniteStateError when any agent blows up.
std::vector<AgentState> step(std::span<const AgentState> states,
                             std::span<const ControlInput> controls, double dt);

}  // namespace flocksim
