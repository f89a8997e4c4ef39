#include "flocksim/control.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace flocksim {

void Saturation::validate() const {
  if (!(limit > 0.0 && limit <= bound))
    throw std::invalid_argument("saturation requires 0 < L <= M");
  if (limit < bound && !(knee > limit))
    throw std::invalid_argument("saturation ramp requires knee > L when L < M");
}

double Saturation::operator()(double s) const {
  const double mag = std::abs(s);
  double out;
  if (mag <= limit) {
    out = mag;
  } else if (limit == bound) {
    out = bound;
  } else {
    out = std::min(bound, limit + (bound - limit) * (mag - limit) / (knee - limit));
  }
  return std::copysign(out, s);
}

void ControlGains::validate() const {
  sigma1.validate();
  sigma2.validate();
  if (!(k_theta > 0.0)) throw std::invalid_argument("k_theta must be positive");
}

double speed_control(std::size_t i, std::span<const AgentState> states,
                     const ProximityGraph& graph, const PotentialParams& potential,
                     const Saturation& sigma1) {
  const AgentState& self = states[i];
  const Vec2 e = heading_vector(self.theta);
  double gradient_sum = 0.0;
  double consensus_sum = 0.0;
  for (std::size_t j : graph.neighbors(i)) {
    gradient_sum += gradient_force(self.q, states[j].q, potential).dot(e);
    consensus_sum += sigma1(self.v - states[j].v);
  }
  return -gradient_sum - consensus_sum;
}

double orientation_control(std::size_t i, std::span<const AgentState> states,
                           const ProximityGraph& graph, const ControlGains& gains,
                           const HeadingReference& reference) {
  const AgentState& self = states[i];
  const auto neighbors = graph.neighbors(i);
  double disagreement = 0.0;
  for (std::size_t j : neighbors) disagreement += angle_diff(self.theta, states[j].theta);
  disagreement += angle_diff(self.theta, reference.theta);
  const double weight = gains.k_theta / static_cast<double>(neighbors.size() + 1);
  return reference.accel - gains.sigma2(self.w - reference.rate) - weight * disagreement;
}

double leader_speed_control(double v_leader, double v_reference, const Saturation& sigma1) {
  return -sigma1(v_leader - v_reference);
}

double speed_control_bound(std::size_t agents, const PotentialParams& potential,
                           const Saturation& sigma1) {
  const double pairs = agents > 0 ? static_cast<double>(agents - 1) : 0.0;
  return pairs * (potential.max_force() + sigma1.bound);
}

double heading_control_bound(const ControlGains& gains, double reference_accel) {
  return std::abs(reference_accel) + gains.sigma2.bound + 2.0 * std::numbers::pi * gains.k_theta;
}

}  // namespace flocksim
