#include "flocksim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace flocksim {

double energy_V1(std::span<const AgentState> states, const ProximityGraph& graph,
                 const Potential& potential) {
  double link = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i)
    for (std::size_t j : graph.neighbors(i))
      if (j > i) link += potential.value((states[i].q - states[j].q).norm());
  double kinetic = 0.0;
  for (const AgentState& s : states) kinetic += s.v * s.v;
  return link + 0.5 * kinetic;
}

V1Budget v1_budget(std::span<const AgentState> initial, const ProximityGraph& initial_graph,
                   const Potential& potential, double eps2) {
  const auto& p = potential.params();
  const double n = static_cast<double>(initial.size());
  V1Budget out;
  out.link_energy = potential.value(p.R0 - eps2);
  double kinetic = 0.0;
  for (const AgentState& s : initial) kinetic += s.v * s.v;
  out.v1_max = 0.5 * kinetic + 0.5 * n * (n - 1.0) * out.link_energy;
  out.v1_initial = energy_V1(initial, initial_graph, potential);
  out.v1_limit = out.v1_max - 0.5 * (n - 1.0) * (n - 2.0) * out.link_energy;
  out.ok = p.u_max > out.v1_max && out.v1_initial <= out.v1_limit;
  return out;
}

double energy_V2(std::span<const AgentState> states, const ProximityGraph& graph, double k_theta,
                 const HeadingReference& reference) {
  double tracking = 0.0;
  double rates = 0.0;
  double disagreement = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto nb = graph.neighbors(i);
    const double weight = k_theta / static_cast<double>(nb.size() + 1);
    const double e = angle_diff(states[i].theta, reference.theta);
    const double e_dot = states[i].w - reference.rate;
    tracking += weight * e * e;
    rates += e_dot * e_dot;
    for (std::size_t j : nb) {
      const double d = angle_diff(states[i].theta, states[j].theta);
      disagreement += weight * d * d;
    }
  }
  return 0.5 * tracking + 0.5 * rates + 0.25 * disagreement;
}

double heading_lyapunov(std::span<const AgentState> states, const ProximityGraph& graph,
                        double k_theta, const HeadingReference& reference) {
  double rates = 0.0;
  double tracking = 0.0;
  double disagreement = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto nb = graph.neighbors(i);
    const double e = angle_diff(states[i].theta, reference.theta);
    const double e_dot = states[i].w - reference.rate;
    rates += static_cast<double>(nb.size() + 1) * e_dot * e_dot;
    tracking += e * e;
    for (std::size_t j : nb) {
      const double d = angle_diff(states[i].theta, states[j].theta);
      disagreement += d * d;
    }
  }
  return 0.5 * rates + 0.5 * k_theta * tracking + 0.25 * k_theta * disagreement;
}

IdentitySides neighbor_sum_identity(const ProximityGraph& graph, std::span<const double> a,
                                    std::span<const double> b,
                                    const std::function<double(double)>& odd) {
  if (a.size() != graph.size() || b.size() != graph.size())
    throw std::invalid_argument("neighbor_sum_identity: value count must match node count");
  IdentitySides out;
  for (std::size_t i = 0; i < graph.size(); ++i) {
    for (std::size_t j : graph.neighbors(i)) {
      const double f = odd(b[i] - b[j]);
      out.lhs += (a[i] - a[j]) * f;
      out.rhs += a[i] * f;
      out.scale += std::abs(a[i] * f);
    }
  }
  out.lhs *= 0.5;
  return out;
}

bool check_neighbor_sum_identity(const ProximityGraph& graph, std::span<const double> a,
                  std::span<const double> b, const std::function<double(double)>& odd,
                  double tol) {
  const IdentitySides s = neighbor_sum_identity(graph, a, b, odd);
  return std::abs(s.lhs - s.rhs) <= tol * std::max(1.0, s.scale);
}

bool check_linear_sum_identity(const ProximityGraph& graph, std::span<const double> e,
                  std::span<const double> e_dot, double tol) {
  return check_neighbor_sum_identity(graph, e, e_dot, [](double x) { return x; }, tol);
}

bool saturation_product_nonnegative(const Saturation& sigma, double x, double y) {
  return (sigma(x) - sigma(y)) * sigma(x - y) >= 0.0;
}

}  // namespace flocksim
