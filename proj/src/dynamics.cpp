#include "flocksim/dynamics.hpp"

#include <stdexcept>
#include <string>

#include "flocksim/errors.hpp"

namespace flocksim {

StateDerivative derivative(const AgentState& s, const ControlInput& c) {
  return {s.v * heading_vector(s.theta), s.w, c.u, c.tau};
}

namespace {

AgentState advance(const AgentState& s, const StateDerivative& d, double h) {
  return {s.q + h * d.q_dot, s.theta + h * d.theta_dot, s.v + h * d.v_dot, s.w + h * d.w_dot};
}

}  // namespace

AgentState rk4_step(const AgentState& s, const ControlInput& c, double dt) {
  const double half = 0.5 * dt;
  const StateDerivative k1 = derivative(s, c);
  const StateDerivative k2 = derivative(advance(s, k1, half), c);
  const StateDerivative k3 = derivative(advance(s, k2, half), c);
  const StateDerivative k4 = derivative(advance(s, k3, dt), c);
  // Weighted slope first, then scale by dt: constant slopes advance by exactly dt * slope.
  auto blend = [](double a, double b, double c, double d) { return (a + 2.0 * b + 2.0 * c + d) / 6.0; };
  AgentState out;
  out.q = s.q + dt * ((k1.q_dot + 2.0 * k2.q_dot + 2.0 * k3.q_dot + k4.q_dot) / 6.0);
  out.theta = wrap_angle(
      s.theta + dt * blend(k1.theta_dot, k2.theta_dot, k3.theta_dot, k4.theta_dot));
  out.v = s.v + dt * blend(k1.v_dot, k2.v_dot, k3.v_dot, k4.v_dot);
  out.w = s.w + dt * blend(k1.w_dot, k2.w_dot, k3.w_dot, k4.w_dot);
  return out;
}

bool is_finite(const AgentState& s) {
  return std::isfinite(s.q.x()) && std::isfinite(s.q.y()) && std::isfinite(s.theta) &&
         std::isfinite(s.v) && std::isfinite(s.w);
}

std::vector<AgentState> step(std::span<const AgentState> states,
                             std::span<const ControlInput> controls, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  if (states.size() != controls.size())
    throw std::invalid_argument("step: states and controls differ in length");
  std::vector<AgentState> out(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    out[i] = rk4_step(states[i], controls[i], dt);
    if (!is_finite(out[i]))
      throw NonFiniteStateError(i, "non-finite state for agent " + std::to_string(i));
  }
  return out;
}

}  // namespace flocksim
