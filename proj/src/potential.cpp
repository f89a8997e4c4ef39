#include "flocksim/potential.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "flocksim/errors.hpp"

namespace flocksim {

namespace {

constexpr double kQuadratureTolerance = 1e-10;

double integrate_bump(double center, double half_width, double lo, double hi) {
  if (hi <= lo) return 0.0;
  auto f = [=](double s) { return bump(s - center, half_width); };
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, lo, hi, 15,
                                                                        kQuadratureTolerance);
}

}  // namespace

double PotentialParams::max_force() const { return std::max(std::abs(p1), std::abs(p2)); }

void PotentialParams::validate() const {
  if (!(0.0 < r0 && r0 < a && a < A && A < R0))
    throw std::invalid_argument("potential geometry must satisfy 0 < r0 < a < A < R0");
  if (!(u_max > 0.0)) throw std::invalid_argument("potential ceiling u_max must be positive");
  if (!(p1 < 0.0)) throw std::invalid_argument("repulsive amplitude p1 must be negative");
  if (!(p2 > 0.0)) throw std::invalid_argument("attractive amplitude p2 must be positive");
}

double bump(double u, double half_width) {
  const double u2 = u * u;
  const double w2 = half_width * half_width;
  if (!(u2 < w2)) return 0.0;
  return std::exp(-u2 / (w2 - u2));
}

double bump_integral(double half_width) {
  if (!(half_width > 0.0)) throw std::invalid_argument("bump half-width must be positive");
  return integrate_bump(0.0, half_width, -half_width, half_width);
}

PotentialParams calibrate(const PotentialGeometry& geometry, double u_max) {
  if (geometry.a == geometry.r0 || geometry.R0 == geometry.A)
    throw std::invalid_argument("degenerate potential lobe (a == r0 or R0 == A)");
  PotentialParams params{geometry.r0, geometry.a, geometry.A, geometry.R0, u_max, -1.0, 1.0};
  params.validate();
  params.p1 = -u_max / bump_integral(params.repulsive_half_width());
  params.p2 = u_max / bump_integral(params.attractive_half_width());
  return params;
}

double phi(double s, const PotentialParams& p) {
  if (s > p.r0 && s < p.a) return p.p1 * bump(s - p.s0(), p.repulsive_half_width());
  if (s > p.A && s < p.R0) return p.p2 * bump(s - p.s1(), p.attractive_half_width());
  return 0.0;
}

double potential_U(double r, const PotentialParams& p) {
  if (r <= p.r0 || r >= p.R0) return p.u_max;
  double u = p.u_max +
             p.p1 * integrate_bump(p.s0(), p.repulsive_half_width(), p.r0, std::min(r, p.a));
  if (r > p.A) u += p.p2 * integrate_bump(p.s1(), p.attractive_half_width(), p.A, r);
  return std::clamp(u, 0.0, p.u_max);
}

Vec2 gradient_force(const Vec2& q_i, const Vec2& q_j, const PotentialParams& params) {
  const Vec2 d = q_i - q_j;
  const double r = d.norm();
  if (!(r > 0.0)) throw CollisionError("gradient_force: coincident positions");
  return (phi(r, params) / r) * d;
}

void Potential::Lobe::build(double lo_, double hi_, std::size_t knots) {
  lo = lo_;
  hi = hi_;
  center = 0.5 * (lo + hi);
  half_width = 0.5 * (hi - lo);
  step = (hi - lo) / static_cast<double>(knots - 1);
  cumulative.assign(knots, 0.0);
  slope.assign(knots, 0.0);
  for (std::size_t k = 1; k < knots; ++k) {
    const double x0 = lo + step * static_cast<double>(k - 1);
    const double x1 = k + 1 == knots ? hi : lo + step * static_cast<double>(k);
    cumulative[k] = cumulative[k - 1] + integrate_bump(center, half_width, x0, x1);
  }
  integral = cumulative.back();
  for (std::size_t k = 0; k < knots; ++k) {
    cumulative[k] /= integral;
    slope[k] = bump(lo + step * static_cast<double>(k) - center, half_width) / integral;
  }
  cumulative.back() = 1.0;
}

double Potential::Lobe::fraction(double r) const {
  if (r <= lo) return 0.0;
  if (r >= hi) return 1.0;
  const double x = (r - lo) / step;
  const auto k = std::min(static_cast<std::size_t>(x), cumulative.size() - 2);
  const double t = x - static_cast<double>(k);
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
  const double h10 = t3 - 2.0 * t2 + t;
  const double h01 = -2.0 * t3 + 3.0 * t2;
  const double h11 = t3 - t2;
  const double f = h00 * cumulative[k] + h10 * step * slope[k] + h01 * cumulative[k + 1] +
                   h11 * step * slope[k + 1];
  return std::clamp(f, 0.0, 1.0);
}

Potential::Potential(const PotentialParams& params, std::size_t knots) : params_(params) {
  params_.validate();
  if (knots < 8) throw std::invalid_argument("Potential: need at least 8 spline knots");
  repulsive_.build(params_.r0, params_.a, knots / 2);
  attractive_.build(params_.A, params_.R0, knots - knots / 2);
  repulsive_drop_ = -params_.p1 * repulsive_.integral;
  attractive_rise_ = params_.p2 * attractive_.integral;
  dead_zone_level_ = params_.u_max - repulsive_drop_;
  // Residuals at quadrature round-off level are an exact zero for calibrated params.
  if (std::abs(dead_zone_level_) <= 1e-12 * params_.u_max) dead_zone_level_ = 0.0;
}

double Potential::value(double r) const {
  const auto& p = params_;
  double u;
  if (r <= p.r0 || r >= p.R0) {
    u = p.u_max;
  } else if (r < p.a) {
    u = p.u_max - repulsive_drop_ * repulsive_.fraction(r);
  } else if (r <= p.A) {
    u = dead_zone_level_;
  } else {
    u = dead_zone_level_ + attractive_rise_ * attractive_.fraction(r);
  }
  return std::clamp(u, 0.0, p.u_max);
}

}  // namespace flocksim
