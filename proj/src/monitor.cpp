#include "flocksim/monitor.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "flocksim/geometry.hpp"

namespace flocksim {

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::collision: return "collision";
    case ViolationKind::cohesion: return "cohesion";
    case ViolationKind::energy_increase: return "energy_increase";
    case ViolationKind::lyapunov_increase: return "lyapunov_increase";
    case ViolationKind::connectivity: return "connectivity";
    case ViolationKind::input_bound: return "input_bound";
    case ViolationKind::obstacle_collision: return "obstacle_collision";
    case ViolationKind::aborted: return "aborted";
  }
  return "unknown";
}

Monitor::Monitor(MonitorConfig config) : config_(config) {}

void Monitor::flag(ViolationKind kind, const StepObservation& obs, std::string detail) {
  report_.violations.push_back({kind, obs.step, obs.t, std::move(detail)});
}

StepMetrics Monitor::observe(const StepObservation& obs) {
  const auto& states = obs.states;
  const std::size_t n = states.size();
  StepMetrics m;
  m.t = obs.t;
  m.V1 = obs.v1;
  m.V2 = obs.v2;
  m.V2w = obs.v2w;
  m.d_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    m.heading_error = std::max(m.heading_error,
                               std::abs(angle_diff(states[i].theta, config_.theta_r)));
    m.angular_speed_max = std::max(m.angular_speed_max, std::abs(states[i].w));
    m.u_max_abs = std::max(m.u_max_abs, std::abs(obs.controls[i].u));
    m.tau_max_abs = std::max(m.tau_max_abs, std::abs(obs.controls[i].tau));
    for (std::size_t j = i + 1; j < n; ++j) {
      m.d_min = std::min(m.d_min, (states[i].q - states[j].q).norm());
      m.speed_spread = std::max(m.speed_spread, std::abs(states[i].v - states[j].v));
      m.heading_spread =
          std::max(m.heading_spread, std::abs(angle_diff(states[i].theta, states[j].theta)));
    }
  }
  m.connected = obs.graph->is_connected();
  m.edge_count = obs.graph->edge_count();
  m.edges_added = obs.event ? obs.event->added.size() : 0;
  m.edges_removed = obs.event ? obs.event->removed.size() : 0;
  m.obstacle_clearance = obs.obstacle_clearance;
  m.obstacle_mode_agents = obs.obstacle_mode_agents;

  if (obs.step == 0) report_.initial_edges = m.edge_count;
  report_.steps = obs.step + 1;
  report_.d_min = std::min(report_.d_min, m.d_min);
  report_.obstacle_clearance = std::min(report_.obstacle_clearance, m.obstacle_clearance);
  report_.u_max_abs = std::max(report_.u_max_abs, m.u_max_abs);
  report_.tau_max_abs = std::max(report_.tau_max_abs, m.tau_max_abs);
  report_.added_edges += m.edges_added;
  report_.removed_edges += m.edges_removed;
  const bool switched = m.edges_added + m.edges_removed > 0;
  if (switched) {
    ++report_.switch_count;
    report_.final_switch_time = obs.t;
    last_switch_step_ = obs.step;
  }

  if (m.d_min <= config_.r0) flag(ViolationKind::collision, obs, fmt::format("d_min = {}", m.d_min));
  if (m.edges_removed > 0) {
    flag(ViolationKind::cohesion, obs,
         fmt::format("{} link(s) stretched to R0 and dropped", m.edges_removed));
  }
  if (!m.connected) flag(ViolationKind::connectivity, obs, "proximity graph disconnected");
  if (m.obstacle_clearance <= 0.0)
    flag(ViolationKind::obstacle_collision, obs, fmt::format("clearance = {}", m.obstacle_clearance));
  if (m.u_max_abs > config_.u_bound)
    flag(ViolationKind::input_bound, obs,
         fmt::format("|u| = {} exceeds {}", m.u_max_abs, config_.u_bound));
  if (m.tau_max_abs > config_.tau_bound)
    flag(ViolationKind::input_bound, obs,
         fmt::format("|tau| = {} exceeds {}", m.tau_max_abs, config_.tau_bound));

  // Link additions may raise V1 by at most m1 U(R0 - eps2).
  if (m.edges_added > 0) {
    const double jump = obs.v1 - obs.v1_before_switch;
    const double excess = jump - static_cast<double>(m.edges_added) * config_.link_energy;
    report_.max_v1_jump_excess = std::max(report_.max_v1_jump_excess, excess);
    if (excess > config_.jump_slack)
      flag(ViolationKind::energy_increase, obs,
           fmt::format("V1 jump {} over {} added link(s)", jump, m.edges_added));
  }

  const bool in_obstacle_mode = obs.obstacle_mode_agents > 0;
  if (has_previous_ && config_.check_energy_descent && !in_obstacle_mode &&
      !previous_in_obstacle_mode_) {
    const double rise = obs.v1_before_switch - previous_v1_;
    report_.max_v1_increase = std::max(report_.max_v1_increase, rise);
    if (rise > 1e-6 * (1.0 + previous_v1_))
      flag(ViolationKind::energy_increase, obs, fmt::format("V1 rose by {}", rise));
  }
  has_previous_ = true;
  previous_v1_ = obs.v1;
  previous_in_obstacle_mode_ = in_obstacle_mode;
  v2_series_.push_back(obs.v2);
  v2w_series_.push_back(obs.v2w);
  time_series_.push_back(obs.t);
  return m;
}

MonitorReport Monitor::finish() {
  if (config_.check_lyapunov) {
    for (std::size_t k = last_switch_step_ + 1; k < v2_series_.size(); ++k) {
      report_.max_v2_increase =
          std::max(report_.max_v2_increase, v2_series_[k] - v2_series_[k - 1]);
      const double rise = v2w_series_[k] - v2w_series_[k - 1];
      report_.max_v2w_increase = std::max(report_.max_v2w_increase, rise);
      if (rise > 1e-6 * (1.0 + v2w_series_[k - 1])) {
        report_.violations.push_back(
            {ViolationKind::lyapunov_increase, k, time_series_[k],
             fmt::format("orientation energy rose by {} after the final switch", rise)});
      }
    }
  }
  std::stable_sort(report_.violations.begin(), report_.violations.end(),
                   [](const Violation& a, const Violation& b) { return a.step < b.step; });
  return report_;
}

}  // namespace flocksim
