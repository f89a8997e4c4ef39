#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "flocksim/dynamics.hpp"
#include "flocksim/proximity_graph.hpp"

namespace flocksim {

enum class ViolationKind {
  collision,           ///< d_min <= r0
  cohesion,            ///< a linked pair reached R0 (link dropped)
  energy_increase,     ///< V1 rose between switches, or a link-addition jump exceeded m1 U(R0 - eps2)
  lyapunov_increase,   ///< the degree-weighted orientation energy rose after the final switch
  connectivity,        ///< G(t) disconnected
  input_bound,         ///< |u| or |tau| above its analytic bound
  obstacle_collision,  ///< an agent touched an obstacle
  aborted,             ///< the run ended early (non-finite state or contact)
};

const char* to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::size_t step = 0;
  double t = 0.0;
  std::string detail;
};

/// Per-step quantities derived from the snapshot at time t.
struct StepMetrics {
  double t = 0.0;
  double V1 = 0.0;
  double V2 = 0.0;
  double V2w = 0.0;  ///< heading_lyapunov
  double d_min = 0.0;
  double speed_spread = 0.0;    ///< max |v_i - v_j|
  double heading_spread = 0.0;  ///< max |wrap(theta_i - theta_j)|
  double heading_error = 0.0;   ///< max |wrap(theta_i - theta_r)|
  double angular_speed_max = 0.0;
  double u_max_abs = 0.0;
  double tau_max_abs = 0.0;
  bool connected = true;
  std::size_t edge_count = 0;
  std::size_t edges_added = 0;
  std::size_t edges_removed = 0;
  double obstacle_clearance = std::numeric_limits<double>::infinity();
  std::size_t obstacle_mode_agents = 0;
};

struct MonitorConfig {
  double r0 = 1.0;
  double R0 = 8.0;
  double u_bound = std::numeric_limits<double>::infinity();
  double tau_bound = std::numeric_limits<double>::infinity();
  /// U(R0 - eps2): the energy one newly added link may carry.
  double link_energy = 0.0;
  double theta_r = 0.0;
  /// V1 descent between switches; disabled for leader runs.
  bool check_energy_descent = true;
  /// Orientation-energy descent after the final switch; obstacle-free runs only.
  bool check_lyapunov = true;
  double jump_slack = 1e-9;
};

/// Everything the monitor needs about one step. `v1_before_switch` is V1 at the
/// current positions with the previous edge set E(t-); `v1` uses E(t).
struct StepObservation {
  std::size_t step = 0;
  double t = 0.0;
  std::span<const AgentState> states;
  std::span<const ControlInput> controls;
  const ProximityGraph* graph = nullptr;
  const SwitchEvent* event = nullptr;
  double v1_before_switch = 0.0;
  double v1 = 0.0;
  double v2 = 0.0;
  double v2w = 0.0;
  double obstacle_clearance = std::numeric_limits<double>::infinity();
  std::size_t obstacle_mode_agents = 0;
};

struct MonitorReport {
  std::vector<Violation> violations;
  std::size_t steps = 0;
  std::size_t initial_edges = 0;  ///< m0
  std::size_t added_edges = 0;    ///< total links added after t = 0
  std::size_t removed_edges = 0;
  std::size_t switch_count = 0;
  double final_switch_time = 0.0;  ///< t_k (0 when the graph never switched)
  double d_min = std::numeric_limits<double>::infinity();
  double obstacle_clearance = std::numeric_limits<double>::infinity();
  double u_max_abs = 0.0;
  double tau_max_abs = 0.0;
  double max_v1_increase = 0.0;  ///< largest V1 rise between switches (checked steps only)
  double max_v1_jump_excess = 0.0;  ///< largest addition jump minus m1 U(R0 - eps2)
  double max_v2_increase = 0.0;   ///< largest V2 rise after the final switch (not checked)
  double max_v2w_increase = 0.0;  ///< largest V2w rise after the final switch

  bool certified() const { return violations.empty(); }
};

/// Runtime monitor for collision, cohesion, energy descent, connectivity and
/// input bounds. Feed one observation per step, in order; call finish() once.
class Monitor {
 public:
  explicit Monitor(MonitorConfig config);

  StepMetrics observe(const StepObservation& obs);
  MonitorReport finish();

  const MonitorConfig& config() const { return config_; }

 private:
  void flag(ViolationKind kind, const StepObservation& obs, std::string detail);

  MonitorConfig config_;
  MonitorReport report_;
  bool has_previous_ = false;
  double previous_v1_ = 0.0;
  bool previous_in_obstacle_mode_ = false;
  std::vector<double> v2_series_;
  std::vector<double> v2w_series_;
  std::vector<double> time_series_;
  std::size_t last_switch_step_ = 0;
};

}  // namespace flocksim
