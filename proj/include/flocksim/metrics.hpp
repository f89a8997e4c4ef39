#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "flocksim/control.hpp"
#include "flocksim/dynamics.hpp"
#include "flocksim/potential.hpp"
#include "flocksim/proximity_graph.hpp"

namespace flocksim {

/// V1 = 1/2 sum_i sum_{j in N_i} U(q_i, q_j) + 1/2 sum_i v_i^2.
double energy_V1(std::span<const AgentState> states, const ProximityGraph& graph,
                 const Potential& potential);

struct V1Budget {
  double v1_max = 0.0;      ///< 1/2 sum v(0)^2 + N(N-1)/2 U(R0 - eps2)
  double v1_initial = 0.0;  ///< V1(0)
  double v1_limit = 0.0;    ///< v1_max - (N-1)(N-2)/2 U(R0 - eps2)
  double link_energy = 0.0; ///< U(R0 - eps2)
  bool ok = false;          ///< u_max > v1_max and v1_initial <= v1_limit
};

V1Budget v1_budget(std::span<const AgentState> initial, const ProximityGraph& initial_graph,
                   const Potential& potential, double eps2);

/// Orientation Lyapunov function with e_i = wrap(theta_i - theta_r), e_i' = w_i - theta_r':
///   1/2 sum k/(n_i+1) e_i^2 + 1/2 sum e_i'^2 + 1/4 sum_i sum_{j in N_i} k/(n_i+1) wrap(theta_i - theta_j)^2
double energy_V2(std::span<const AgentState> states, const ProximityGraph& graph, double k_theta,
                 const HeadingReference& reference);

/// Degree-weighted orientation energy
///   1/2 sum (n_i+1) e_i'^2 + k/2 sum e_i^2 + k/4 sum_i sum_{j in N_i} wrap(theta_i - theta_j)^2.
/// Along the orientation law on a fixed graph its derivative is
/// -sum (n_i+1) e_i' sat(e_i') <= 0 for any degrees; energy_V2 only has that
/// property when all degrees are equal.
double heading_lyapunov(std::span<const AgentState> states, const ProximityGraph& graph,
                        double k_theta, const HeadingReference& reference);

/// Both sides of the neighbor-sum identity for an odd function f:
///   lhs = 1/2 sum_i sum_{j in N_i} (a_i - a_j) f(b_i - b_j)
///   rhs =     sum_i sum_{j in N_i}  a_i        f(b_i - b_j)
/// `scale` is sum |a_i f(b_i - b_j)|, for relative comparisons.
struct IdentitySides {
  double lhs = 0.0;
  double rhs = 0.0;
  double scale = 0.0;
};

IdentitySides neighbor_sum_identity(const ProximityGraph& graph, std::span<const double> a,
                                    std::span<const double> b,
                                    const std::function<double(double)>& odd);

/// |lhs - rhs| <= tol * max(1, scale).
bool check_neighbor_sum_identity(const ProximityGraph& graph, std::span<const double> a,
                  std::span<const double> b, const std::function<double(double)>& odd,
                  double tol = 1e-12);

/// The identity with f = identity applied to trajectory errors e and their rates.
bool check_linear_sum_identity(const ProximityGraph& graph, std::span<const double> e,
                  std::span<const double> e_dot, double tol = 1e-12);

/// (f(x) - f(y)) f(x - y) >= 0.
bool saturation_product_nonnegative(const Saturation& sigma, double x, double y);

}  // namespace flocksim
