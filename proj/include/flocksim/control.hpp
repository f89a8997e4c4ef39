#pragma once

#include <cstddef>
#include <span>

#include "flocksim/dynamics.hpp"
#include "flocksim/potential.hpp"
#include "flocksim/proximity_graph.hpp"

namespace flocksim {

/// Odd, nondecreasing saturation: identity on |s| <= limit, bounded by `bound`.
/// With limit == bound this is a plain clamp. With limit < bound the output
/// ramps linearly from `limit` at s = limit to `bound` at s = knee.
struct Saturation {
  double limit = 0.5;
  double bound = 0.5;
  double knee = 0.5;

  void validate() const;
  double operator()(double s) const;
};

inline double sat(double s, const Saturation& p) { return p(s); }

/// Desired flock heading and its first two time derivatives.
struct HeadingReference {
  double theta = 0.0;
  double rate = 0.0;
  double accel = 0.0;
};

struct ControlGains {
  Saturation sigma1;
  Saturation sigma2;
  double k_theta = 1.5;
  HeadingReference reference;

  void validate() const;
};

/// Speed-consensus law:
///   u_i = -sum_{j in N_i} grad_{q_i}U(q_i, q_j) . e(theta_i) - sum_{j in N_i} sigma1(v_i - v_j)
double speed_control(std::size_t i, std::span<const AgentState> states,
                     const ProximityGraph& graph, const PotentialParams& potential,
                     const Saturation& sigma1);

/// Orientation-consensus law with angle differences taken on the circle:
///   tau_i = theta_r'' - sigma2(w_i - theta_r')
///           - k/(n_i + 1) [ sum_j wrap(theta_i - theta_j) + wrap(theta_i - theta_r) ]
double orientation_control(std::size_t i, std::span<const AgentState> states,
                           const ProximityGraph& graph, const ControlGains& gains,
                           const HeadingReference& reference);

/// Leader cruise law u_l = -sigma1(v_l - v_r).
double leader_speed_control(double v_leader, double v_reference, const Saturation& sigma1);

/// (N - 1)(max |phi| + M1): the largest |u_i| the speed law can produce.
double speed_control_bound(std::size_t agents, const PotentialParams& potential,
                           const Saturation& sigma1);

/// |theta_r''| + M2 + 2 pi k_theta.
double heading_control_bound(const ControlGains& gains, double reference_accel);

}  // namespace flocksim
