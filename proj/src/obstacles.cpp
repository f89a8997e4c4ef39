#include "flocksim/obstacles.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "flocksim/errors.hpp"

namespace flocksim {

double clearance(const Vec2& q, const Obstacle& obstacle) {
  return (q - obstacle.center).norm() - obstacle.radius;
}

Vec2 project(const Vec2& q_r, const Obstacle& obstacle) {
  const Vec2 offset = q_r - obstacle.center;
  const double distance = offset.norm();
  if (!(distance > obstacle.radius))
    throw CollisionError("robot is on or inside an obstacle");
  return obstacle.center + (obstacle.radius / distance) * offset;
}

VirtualAgent virtual_agent(const Vec2& q_r, double v, double theta, const Obstacle& obstacle) {
  VirtualAgent out;
  out.position = project(q_r, obstacle);
  const Vec2 e = heading_vector(theta);
  const Vec2 to_center = obstacle.center - q_r;
  out.alpha = std::atan2(cross(e, to_center), e.dot(to_center));
  const double gap = (q_r - out.position).norm();
  out.speed = v * obstacle.radius * std::sin(out.alpha) / gap;
  const double turn = out.alpha > 0.0 ? -0.5 * std::numbers::pi : 0.5 * std::numbers::pi;
  out.heading = wrap_angle(turn + out.alpha + theta);
  return out;
}

double circular_mean(std::span<const double> angles) {
  if (angles.empty()) return 0.0;
  double s = 0.0;
  double c = 0.0;
  for (double a : angles) {
    s += std::sin(a);
    c += std::cos(a);
  }
  return std::atan2(s, c);
}

double obstacle_speed_control(std::size_t i, std::span<const AgentState> states,
                              std::span<const VirtualAgent> virtuals,
                              const PotentialParams& potential, const Saturation& sigma1) {
  const AgentState& self = states[i];
  const Vec2 e = heading_vector(self.theta);
  double gradient_sum = 0.0;
  double consensus_sum = 0.0;
  for (const VirtualAgent& va : virtuals) {
    gradient_sum += gradient_force(self.q, va.position, potential).dot(e);
    consensus_sum += sigma1(self.v - va.speed);
  }
  return -gradient_sum - consensus_sum;
}

HeadingReference obstacle_reference(std::span<const VirtualAgent> virtuals) {
  if (virtuals.size() == 1) return {virtuals.front().heading, 0.0, 0.0};
  std::vector<double> headings;
  headings.reserve(virtuals.size());
  for (const VirtualAgent& va : virtuals) headings.push_back(va.heading);
  return {circular_mean(headings), 0.0, 0.0};
}

double obstacle_heading_control(std::size_t i, std::span<const AgentState> states,
                                const ProximityGraph& graph, std::span<const VirtualAgent> virtuals,
                                const ControlGains& gains) {
  return orientation_control(i, states, graph, gains, obstacle_reference(virtuals));
}

ObstacleTracker::ObstacleTracker(std::vector<Obstacle> obstacles, std::size_t agents,
                                 double engage_distance, double release_distance)
    : obstacles_(std::move(obstacles)),
      agents_(agents),
      engage_distance_(engage_distance),
      release_distance_(release_distance),
      engaged_(agents * obstacles_.size(), 0),
      virtuals_(agents),
      min_clearance_(std::numeric_limits<double>::infinity()) {
  if (!(release_distance >= engage_distance))
    throw std::invalid_argument("obstacle release distance must not be below engage distance");
  for (const Obstacle& o : obstacles_)
    if (!(o.radius > 0.0)) throw std::invalid_argument("obstacle radius must be positive");
}

void ObstacleTracker::update(std::span<const AgentState> states) {
  if (states.size() != agents_) throw std::invalid_argument("tracker: agent count mismatch");
  const std::size_t m = obstacles_.size();
  min_clearance_ = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < agents_; ++i) {
    virtuals_[i].clear();
    for (std::size_t k = 0; k < m; ++k) {
      const double c = clearance(states[i].q, obstacles_[k]);
      min_clearance_ = std::min(min_clearance_, c);
      unsigned char& flag = engaged_[i * m + k];
      if (flag) {
        if (c > release_distance_) flag = 0;
      } else if (c < engage_distance_) {
        flag = 1;
      }
      if (flag) virtuals_[i].push_back(virtual_agent(states[i].q, states[i].v, states[i].theta,
                                                     obstacles_[k]));
    }
  }
}

std::size_t ObstacleTracker::active_count() const {
  std::size_t n = 0;
  for (const auto& v : virtuals_) n += v.empty() ? 0 : 1;
  return n;
}

}  // namespace flocksim
