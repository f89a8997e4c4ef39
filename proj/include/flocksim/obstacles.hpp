#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "flocksim/control.hpp"
#include "flocksim/dynamics.hpp"
#include "flocksim/geometry.hpp"
#include "flocksim/potential.hpp"
#include "flocksim/proximity_graph.hpp"

namespace flocksim {

struct Obstacle {
  Vec2 center = Vec2::Zero();
  double radius = 1.0;
};

/// Projection of a robot onto an obstacle boundary, treated as an extra agent.
struct VirtualAgent {
  Vec2 position = Vec2::Zero();
  double speed = 0.0;
  double heading = 0.0;
  double alpha = 0.0;  ///< signed angle from the robot heading to the ray toward the center
};

/// Distance from q to the obstacle boundary (negative inside).
double clearance(const Vec2& q, const Obstacle& obstacle);

/// Nearest boundary point to q_r. Throws CollisionError when q_r is on or inside the circle.
Vec2 project(const Vec2& q_r, const Obstacle& obstacle);

/// Position, speed v r sin(alpha) / |q_r - q_obs| and tangent heading of the projection point.
VirtualAgent virtual_agent(const Vec2& q_r, double v, double theta, const Obstacle& obstacle);

/// Circular (vector) mean of angles; returns 0 for an empty set.
double circular_mean(std::span<const double> angles);

/// Virtual-agent part of the obstacle speed law:
///   -sum_{k} grad_{q_i}U(q_i, q_k) . e(theta_i) - sum_k sigma1(v_i - v_k)
double obstacle_speed_control(std::size_t i, std::span<const AgentState> states,
                              std::span<const VirtualAgent> virtuals,
                              const PotentialParams& potential, const Saturation& sigma1);

/// Heading reference while avoiding: circular mean of the virtual-agent headings,
/// with zero rate and acceleration.
HeadingReference obstacle_reference(std::span<const VirtualAgent> virtuals);

/// Heading law in obstacle mode: the orientation-consensus law with the flock
/// reference replaced by obstacle_reference(virtuals).
double obstacle_heading_control(std::size_t i, std::span<const AgentState> states,
                                const ProximityGraph& graph, std::span<const VirtualAgent> virtuals,
                                const ControlGains& gains);

/// Per (agent, obstacle) engagement with hysteresis: a pair engages when the
/// clearance drops below `engage_distance` and releases once it exceeds
/// `release_distance`. An agent is in obstacle mode while any pair is engaged.
class ObstacleTracker {
 public:
  ObstacleTracker() = default;
  ObstacleTracker(std::vector<Obstacle> obstacles, std::size_t agents, double engage_distance,
                  double release_distance);

  /// Updates engagement from the current states and rebuilds the virtual agents.
  /// Throws CollisionError if any agent is on or inside an obstacle.
  void update(std::span<const AgentState> states);

  bool active(std::size_t agent) const { return !virtuals_[agent].empty(); }
  std::size_t active_count() const;
  std::span<const VirtualAgent> virtuals(std::size_t agent) const { return virtuals_[agent]; }
  const std::vector<std::vector<VirtualAgent>>& all_virtuals() const { return virtuals_; }
  const std::vector<Obstacle>& obstacles() const { return obstacles_; }
  /// Smallest agent-to-boundary clearance seen in the last update (+inf without obstacles).
  double min_clearance() const { return min_clearance_; }

 private:
  std::vector<Obstacle> obstacles_;
  std::size_t agents_ = 0;
  double engage_distance_ = 0.0;
  double release_distance_ = 0.0;
  std::vector<unsigned char> engaged_;  // agents x obstacles
  std::vector<std::vector<VirtualAgent>> virtuals_;
  double min_clearance_ = 0.0;
};

}  // namespace flocksim
