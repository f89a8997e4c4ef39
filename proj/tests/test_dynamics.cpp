#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "flocksim/dynamics.hpp"
#include "flocksim/errors.hpp"
#include "flocksim/geometry.hpp"

using namespace flocksim;

namespace {

constexpr double kPi = std::numbers::pi;

// Position error after one full turn of the v = w = 1 circle integrated with n steps.
double circle_error(int n) {
  const double dt = 2.0 * kPi / n;
  AgentState s;
  s.v = 1.0;
  s.w = 1.0;
  for (int k = 0; k < n; ++k) s = rk4_step(s, {}, dt);
  return s.q.norm();
}

// Error at t = 1.5 against the closed form (sin t, 1 - cos t) of the same circle.
double arc_error(int n) {
  const double t = 1.5;
  const double dt = t / n;
  AgentState s;
  s.v = 1.0;
  s.w = 1.0;
  for (int k = 0; k < n; ++k) s = rk4_step(s, {}, dt);
  return (s.q - Vec2(std::sin(t), 1.0 - std::cos(t))).norm();
}

}  // namespace

TEST(Dynamics, DerivativeExamples) {
  AgentState s;
  s.v = 1.0;
  auto d = derivative(s, {});
  EXPECT_EQ(d.q_dot, Vec2(1.0, 0.0));
  EXPECT_EQ(d.theta_dot, 0.0);
  EXPECT_EQ(d.v_dot, 0.0);
  EXPECT_EQ(d.w_dot, 0.0);

  s.v = 2.0;
  s.theta = kPi / 2.0;
  d = derivative(s, {});
  EXPECT_NEAR(d.q_dot.x(), 0.0, 1e-12);
  EXPECT_NEAR(d.q_dot.y(), 2.0, 1e-12);

  d = derivative(AgentState{}, {0.3, -0.1});
  EXPECT_EQ(d.v_dot, 0.3);
  EXPECT_EQ(d.w_dot, -0.1);
}

TEST(Dynamics, StraightLineIsExact) {
  AgentState s;
  s.v = 1.0;
  const AgentState out = rk4_step(s, {}, 0.01);
  EXPECT_EQ(out.q, Vec2(0.01, 0.0));
  EXPECT_EQ(out.v, 1.0);
}

TEST(Dynamics, SpinAdvancesHeading) {
  AgentState s;
  s.w = 1.0;
  const AgentState out = rk4_step(s, {}, 0.01);
  EXPECT_NEAR(out.theta, 0.01, 1e-15);
  EXPECT_EQ(out.q, Vec2(0.0, 0.0));
}

TEST(Dynamics, CircleClosesAfterOneTurn) { EXPECT_LE(circle_error(628), 1e-8); }

TEST(Dynamics, FourthOrderConvergence) {
  // Least-squares slope of log error against log dt over one decade of dt.
  // A closed turn cancels the per-step error by symmetry, so the slope is taken on an open arc.
  const std::vector<int> steps{10, 20, 40, 80, 100};
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int n : steps) {
    const double x = std::log(1.5 / n);
    const double y = std::log(arc_error(n));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(steps.size());
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  EXPECT_GE(slope, 3.7);
  EXPECT_LE(slope, 4.3);
}

TEST(Dynamics, ZeroInputConservesRates) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int k = 0; k < 100; ++k) {
    AgentState s{Vec2(u(gen), u(gen)), u(gen), u(gen), u(gen)};
    const AgentState out = rk4_step(s, {}, 0.01);
    ASSERT_EQ(out.v, s.v);
    ASSERT_EQ(out.w, s.w);
  }
}

TEST(Dynamics, HeadingStaysWrapped) {
  AgentState s;
  s.theta = kPi - 0.001;
  s.w = 1.0;
  const AgentState out = rk4_step(s, {}, 0.01);
  EXPECT_GT(out.theta, -kPi);
  EXPECT_LE(out.theta, kPi);
  EXPECT_NEAR(out.theta, -kPi + 0.009, 1e-12);
}

TEST(Dynamics, WrapAngleInterval) {
  EXPECT_EQ(wrap_angle(kPi), kPi);
  EXPECT_EQ(wrap_angle(-kPi), kPi);
  EXPECT_NEAR(wrap_angle(3.0 * kPi / 2.0), -kPi / 2.0, 1e-15);
  EXPECT_NEAR(angle_diff(kPi - 0.1, -kPi + 0.1), -0.2, 1e-12);
}

TEST(Dynamics, StepIsDeterministic) {
  std::vector<AgentState> s(3);
  s[0].v = 0.3;
  s[1].w = 0.2;
  s[2].theta = 1.0;
  const std::vector<ControlInput> c{{0.1, 0.2}, {-0.3, 0.0}, {0.0, -0.4}};
  const auto a = step(s, c, 0.01);
  const auto b = step(s, c, 0.01);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(a[i].q, b[i].q);
    EXPECT_EQ(a[i].theta, b[i].theta);
    EXPECT_EQ(a[i].v, b[i].v);
    EXPECT_EQ(a[i].w, b[i].w);
  }
}

TEST(Dynamics, StepRejectsBadArguments) {
  std::vector<AgentState> s(2);
  std::vector<ControlInput> c(1);
  EXPECT_THROW(step(s, c, 0.01), std::invalid_argument);
  c.resize(2);
  EXPECT_THROW(step(s, c, 0.0), std::invalid_argument);
  c[1].u = std::numeric_limits<double>::infinity();
  EXPECT_THROW(step(s, c, 0.01), NonFiniteStateError);
}
