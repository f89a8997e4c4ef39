#pragma once

#include <cmath>
#include <numbers>

#include <Eigen/Core>

namespace flocksim {

using Vec2 = Eigen::Vector2d;

/// Unit heading vector e(theta).
inline Vec2 heading_vector(double theta) { return {std::cos(theta), std::sin(theta)}; }

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double angle) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double wrapped = std::fmod(angle + std::numbers::pi, two_pi);
  if (wrapped < 0.0) wrapped += two_pi;
  wrapped -= std::numbers::pi;
  // fmod maps +pi to -pi; the interval is half-open on the other side.
  return wrapped == -std::numbers::pi ? std::numbers::pi : wrapped;
}

/// Shortest signed angular distance from `to` to `from`, in (-pi, pi].
inline double angle_diff(double from, double to) { return wrap_angle(from - to); }

inline double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

}  // namespace flocksim
