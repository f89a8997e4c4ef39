#pragma once

#include <cstddef>
#include <vector>

#include "flocksim/geometry.hpp"

namespace flocksim {

/// Geometry of the coordination function: repulsive lobe on (r0, a), dead zone
/// [a, A], attractive lobe on (A, R0).
struct PotentialGeometry {
  double r0 = 1.0;
  double a = 3.0;
  double A = 6.0;
  double R0 = 8.0;
};

struct PotentialParams {
  double r0 = 1.0;
  double a = 3.0;
  double A = 6.0;
  double R0 = 8.0;
  double u_max = 15.0;
  double p1 = 0.0;  ///< repulsive amplitude, negative
  double p2 = 0.0;  ///< attractive amplitude, positive

  double s0() const { return 0.5 * (r0 + a); }
  double s1() const { return 0.5 * (R0 + A); }
  double repulsive_half_width() const { return 0.5 * (a - r0); }
  double attractive_half_width() const { return 0.5 * (R0 - A); }
  /// Largest force magnitude phi can produce.
  double max_force() const;

  /// Throws std::invalid_argument unless 0 < r0 < a < A < R0, u_max > 0, p1 < 0 < p2.
  void validate() const;
};

/// exp(-u^2 / (w^2 - u^2)) on |u| < w, zero elsewhere.
double bump(double u, double half_width);

/// Integral of the unit-amplitude bump over (-w, w), adaptive Gauss-Kronrod, rel. tol 1e-10.
double bump_integral(double half_width);

/// Picks p1, p2 so that U(a) = 0 and U(R0) = u_max.
/// Throws std::invalid_argument on degenerate or unordered geometry.
PotentialParams calibrate(const PotentialGeometry& geometry, double u_max);

/// Radial force phi(s) = dU/ds. Compact support on (r0, a) and (A, R0).
double phi(double s, const PotentialParams& params);

/// U(r) = u_max + integral of phi from r0 to r on [r0, R0], u_max outside.
/// Evaluated by adaptive quadrature on every call; use Potential::value in loops.
double potential_U(double r, const PotentialParams& params);

/// grad_{q_i} U(|q_i - q_j|) = phi(r) (q_i - q_j) / r.
/// Throws CollisionError when the positions coincide.
Vec2 gradient_force(const Vec2& q_i, const Vec2& q_j, const PotentialParams& params);

/// Coordination function with U tabulated as a cubic Hermite spline of the
/// antiderivative of phi (knots split evenly across the two lobes).
class Potential {
 public:
  static constexpr std::size_t kDefaultKnots = 4096;

  explicit Potential(const PotentialParams& params, std::size_t knots = kDefaultKnots);

  const PotentialParams& params() const { return params_; }

  double force(double s) const { return phi(s, params_); }
  double value(double r) const;
  Vec2 gradient(const Vec2& q_i, const Vec2& q_j) const { return gradient_force(q_i, q_j, params_); }

 private:
  struct Lobe {
    double lo = 0.0;
    double hi = 0.0;
    double center = 0.0;
    double half_width = 0.0;
    double step = 0.0;
    double integral = 0.0;
    std::vector<double> cumulative;  // normalized to [0, 1]
    std::vector<double> slope;       // derivative of the normalized cumulative

    void build(double lo_, double hi_, std::size_t knots);
    double fraction(double r) const;
  };

  PotentialParams params_;
  Lobe repulsive_;
  Lobe attractive_;
  double repulsive_drop_ = 0.0;  // U(r0) - U(a)
  double attractive_rise_ = 0.0; // U(R0) - U(A)
  double dead_zone_level_ = 0.0;
};

}  // namespace flocksim
