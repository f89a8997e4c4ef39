#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flocksim/control.hpp"
#include "flocksim/dynamics.hpp"
#include "flocksim/kernels.hpp"
#include "flocksim/obstacles.hpp"
#include "flocksim/potential.hpp"
#include "flocksim/proximity_graph.hpp"

namespace flocksim {

enum class Placement { two_circles, explicit_list };

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct Scenario {
  std::size_t agents = 15;
  PotentialGeometry geometry;
  double u_max = 15.0;
  /// Explicit amplitudes; both absent means auto-calibration.
  std::optional<double> p1;
  std::optional<double> p2;
  GraphParams graph;
  ControlGains gains;
  double dt = 0.01;
  double horizon = 100.0;
  std::uint64_t seed = 0;

  Placement placement = Placement::two_circles;
  double placement_z = 1.0;
  Interval initial_speed{0.0, 0.8};
  Interval initial_heading{-1.5707963267948966, 1.5707963267948966};
  std::vector<Vec2> positions;  ///< explicit placement
  std::vector<double> headings;
  std::vector<double> speeds;
  std::vector<double> angular_speeds;  ///< optional, zero when absent

  std::optional<LeaderSpec> leader;
  std::vector<Obstacle> obstacles;

  /// Calibrated or explicit coordination-function parameters.
  PotentialParams potential() const;
  /// Number of integration steps: floor(T / dt), tolerant of round-off in T / dt.
  std::size_t step_count() const;
};

/// Parses the flat key/value scenario document. Unknown keys, wrong types and
/// missing explicit-placement lists raise ScenarioError("schema", ...).
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);
/// Canonical text form (loadable by parse_scenario).
std::string to_text(const Scenario& scenario);

/// The circle placement: Gamma = 4 for the first ceil(N/3) agents, 8 otherwise;
/// x = Gamma sin(z pi (i-1)/Gamma + pi), y = Gamma cos(...). Headings and speeds
/// are drawn uniformly from the seeded generator, angular speeds start at 0.
std::vector<AgentState> ring_placement(std::size_t agents, std::uint64_t seed,
                                        Interval speed_range, Interval heading_range,
                                        double z = 1.0);

std::vector<AgentState> initial_states(const Scenario& scenario);

/// Full pre-run validation. Throws ScenarioError with one of the codes
/// invalid_parameter, graph_binding, coincident_positions, obstacle_overlap,
/// disconnected_initial_graph, v1_budget_violated.
void validate(const Scenario& scenario);

/// Built-in scenarios matching the two reference experiments.
Scenario free_flock_scenario(std::uint64_t seed = 0);
Scenario obstacle_scenario(std::uint64_t seed = 0);

}  // namespace flocksim
