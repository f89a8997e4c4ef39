#include <algorithm>
#include <vector>

#include <gtest/gtest.h>

#include "flocksim/metrics.hpp"
#include "flocksim/monitor.hpp"

using namespace flocksim;

namespace {

const GraphParams kGraph{8.0, 1.0, 3.0};

struct Harness {
  std::vector<AgentState> states;
  std::vector<ControlInput> controls;
  ProximityGraph graph;
  SwitchEvent event;

  explicit Harness(std::vector<AgentState> s) : states(std::move(s)), controls(states.size()) {
    std::vector<Vec2> q;
    for (const auto& a : states) q.push_back(a.q);
    graph = ProximityGraph::initial(q, kGraph);
  }

  void move(std::size_t i, Vec2 to, double t) {
    states[i].q = to;
    std::vector<Vec2> q;
    for (const auto& a : states) q.push_back(a.q);
    event = graph.update(q, t, kGraph);
  }

  StepObservation observe(std::size_t step, double v1, double v1_before, double v2 = 0.0,
                          double v2w = 0.0) {
    StepObservation obs;
    obs.step = step;
    obs.t = 0.01 * static_cast<double>(step);
    obs.states = states;
    obs.controls = controls;
    obs.graph = &graph;
    obs.event = &event;
    obs.v1 = v1;
    obs.v1_before_switch = v1_before;
    obs.v2 = v2;
    obs.v2w = v2w;
    return obs;
  }
};

std::vector<AgentState> triangle() {
  return {{Vec2(0, 0), 0.5, 0.3, 0.0}, {Vec2(4.5, 0), 0.5, 0.3, 0.0}, {Vec2(2.25, 3.9), 0.5, 0.3, 0.0}};
}

bool has_kind(const MonitorReport& r, ViolationKind k) {
  return std::any_of(r.violations.begin(), r.violations.end(),
                     [&](const Violation& v) { return v.kind == k; });
}

MonitorConfig config() {
  MonitorConfig c;
  c.u_bound = 10.0;
  c.tau_bound = 10.0;
  c.theta_r = 0.5;
  return c;
}

}  // namespace

TEST(Monitor, StaticConsensusIsCertified) {
  Harness h(triangle());
  Monitor m(config());
  for (std::size_t k = 0; k < 20; ++k) {
    const StepMetrics s = m.observe(h.observe(k, 0.135, 0.135));
    EXPECT_EQ(s.V1, 0.135);
    EXPECT_EQ(s.speed_spread, 0.0);
    EXPECT_EQ(s.heading_error, 0.0);
    EXPECT_TRUE(s.connected);
  }
  const MonitorReport r = m.finish();
  EXPECT_TRUE(r.certified());
  EXPECT_EQ(r.steps, 20u);
  EXPECT_EQ(r.initial_edges, 3u);
  EXPECT_EQ(r.switch_count, 0u);
  EXPECT_DOUBLE_EQ(r.d_min, 4.5);
}

TEST(Monitor, TeleportSplitsFlock) {
  Harness h(triangle());
  Monitor m(config());
  m.observe(h.observe(0, 0.1, 0.1));
  h.move(2, Vec2(40.0, 40.0), 0.01);
  m.observe(h.observe(1, 0.1, 0.1));
  const MonitorReport r = m.finish();
  EXPECT_TRUE(has_kind(r, ViolationKind::connectivity));
  EXPECT_TRUE(has_kind(r, ViolationKind::cohesion));
  EXPECT_EQ(r.removed_edges, 2u);
  EXPECT_FALSE(r.certified());
}

TEST(Monitor, CollisionFlagged) {
  auto s = triangle();
  s[1].q = Vec2(0.9, 0.0);
  Harness h(s);
  Monitor m(config());
  m.observe(h.observe(0, 0.0, 0.0));
  EXPECT_TRUE(has_kind(m.finish(), ViolationKind::collision));
}

TEST(Monitor, InputBoundFlagged) {
  Harness h(triangle());
  Monitor m(config());
  h.controls[1].tau = -10.5;
  m.observe(h.observe(0, 0.0, 0.0));
  const MonitorReport r = m.finish();
  EXPECT_TRUE(has_kind(r, ViolationKind::input_bound));
  EXPECT_EQ(r.tau_max_abs, 10.5);
}

TEST(Monitor, EnergyRiseBetweenSwitches) {
  Harness h(triangle());
  Monitor m(config());
  m.observe(h.observe(0, 1.0, 1.0));
  m.observe(h.observe(1, 1.0 + 0.5e-6, 1.0 + 0.5e-6));
  EXPECT_TRUE(m.finish().certified());

  Monitor m2(config());
  m2.observe(h.observe(0, 1.0, 1.0));
  m2.observe(h.observe(1, 1.01, 1.01));
  EXPECT_TRUE(has_kind(m2.finish(), ViolationKind::energy_increase));

  MonitorConfig led = config();
  led.check_energy_descent = false;
  Monitor m3(led);
  m3.observe(h.observe(0, 1.0, 1.0));
  m3.observe(h.observe(1, 1.01, 1.01));
  EXPECT_TRUE(m3.finish().certified());
}

TEST(Monitor, LinkAdditionJumpAllowance) {
  // Two agents start outside the add threshold and close in: one link is added.
  const std::vector<AgentState> pair{{Vec2(0, 0), 0.5, 0.3, 0.0}, {Vec2(5.5, 0), 0.5, 0.3, 0.0}};
  for (double link_energy : {0.0, 0.25}) {
    Harness h(pair);
    MonitorConfig c = config();
    c.link_energy = link_energy;
    c.check_lyapunov = false;
    Monitor m(c);
    m.observe(h.observe(0, 1.0, 1.0));
    h.move(1, Vec2(4.9, 0.0), 0.01);
    ASSERT_EQ(h.event.added.size(), 1u);
    // V1 with E(t-) stayed put; the new link carries 0.25.
    m.observe(h.observe(1, 1.25, 1.0));
    const MonitorReport r = m.finish();
    EXPECT_EQ(r.added_edges, 1u);
    EXPECT_EQ(r.final_switch_time, 0.01);
    EXPECT_DOUBLE_EQ(r.max_v1_jump_excess, 0.25 - link_energy);
    EXPECT_EQ(has_kind(r, ViolationKind::energy_increase), link_energy == 0.0);
  }
}

TEST(Monitor, OrientationEnergyChecksUseDegreeWeightedForm) {
  Harness h(triangle());
  Monitor m(config());
  // Unweighted energy rises (reported only); weighted one falls.
  m.observe(h.observe(0, 0.0, 0.0, 1.0, 2.0));
  m.observe(h.observe(1, 0.0, 0.0, 1.1, 1.9));
  MonitorReport r = m.finish();
  EXPECT_TRUE(r.certified());
  EXPECT_NEAR(r.max_v2_increase, 0.1, 1e-12);

  Monitor m2(config());
  m2.observe(h.observe(0, 0.0, 0.0, 1.0, 2.0));
  m2.observe(h.observe(1, 0.0, 0.0, 0.9, 2.1));
  r = m2.finish();
  EXPECT_TRUE(has_kind(r, ViolationKind::lyapunov_increase));
  EXPECT_NEAR(r.max_v2w_increase, 0.1, 1e-12);

  MonitorConfig off = config();
  off.check_lyapunov = false;
  Monitor m3(off);
  m3.observe(h.observe(0, 0.0, 0.0, 1.0, 2.0));
  m3.observe(h.observe(1, 0.0, 0.0, 0.9, 2.1));
  EXPECT_TRUE(m3.finish().certified());
}

TEST(Monitor, ObstacleContactFlagged) {
  Harness h(triangle());
  Monitor m(config());
  StepObservation obs = h.observe(0, 0.0, 0.0);
  obs.obstacle_clearance = -0.01;
  obs.obstacle_mode_agents = 1;
  const StepMetrics s = m.observe(obs);
  EXPECT_EQ(s.obstacle_mode_agents, 1u);
  EXPECT_TRUE(has_kind(m.finish(), ViolationKind::obstacle_collision));
}

TEST(Monitor, ViolationNames) {
  EXPECT_STREQ(to_string(ViolationKind::connectivity), "connectivity");
  EXPECT_STREQ(to_string(ViolationKind::lyapunov_increase), "lyapunov_increase");
  EXPECT_STREQ(to_string(ViolationKind::aborted), "aborted");
}
