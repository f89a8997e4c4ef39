#include "flocksim/simulation.hpp"

#include <fmt/format.h>

#include "flocksim/errors.hpp"
#include "flocksim/metrics.hpp"

namespace flocksim {

namespace {

std::vector<Vec2> positions_of(std::span<const AgentState> states) {
  std::vector<Vec2> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(s.q);
  return out;
}

}  // namespace

Trace run(const Scenario& scenario, const RunOptions& options) {
  validate(scenario);
  const PotentialParams params = scenario.potential();
  const Potential potential(params);
  const std::size_t n = scenario.agents;

  Trace trace;
  trace.header.scenario = to_text(scenario);
  trace.header.agents = n;
  trace.header.dt = scenario.dt;
  trace.header.horizon = scenario.horizon;
  trace.header.seed = scenario.seed;
  trace.header.theta_r = scenario.gains.reference.theta;
  trace.header.r0 = params.r0;
  trace.header.R0 = params.R0;
  trace.header.p1 = params.p1;
  trace.header.p2 = params.p2;
  if (scenario.leader) trace.header.leader = scenario.leader->index;

  std::vector<AgentState> states = initial_states(scenario);
  std::vector<AgentState> next(n);
  std::vector<ControlInput> controls(n);
  ProximityGraph graph = ProximityGraph::initial(positions_of(states), scenario.graph);
  ObstacleTracker tracker(scenario.obstacles, n, params.R0, params.R0 + scenario.graph.eps2);

  MonitorConfig mc;
  mc.r0 = params.r0;
  mc.R0 = params.R0;
  mc.u_bound = static_cast<double>(n - 1 + scenario.obstacles.size()) *
               (params.max_force() + scenario.gains.sigma1.bound);
  mc.tau_bound = heading_control_bound(scenario.gains, scenario.gains.reference.accel);
  mc.link_energy = potential.value(params.R0 - scenario.graph.eps2);
  mc.theta_r = scenario.gains.reference.theta;
  mc.check_energy_descent = !scenario.leader.has_value();
  mc.check_lyapunov = scenario.obstacles.empty();
  Monitor monitor(mc);

  const std::size_t steps = scenario.step_count();
  trace.rows.reserve(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * scenario.dt;
    try {
      SwitchEvent event{t, {}, {}};
      double v1_before = 0.0;
      if (k > 0) {
        v1_before = energy_V1(states, graph, potential);
        event = graph.update(positions_of(states), t, scenario.graph);
      }
      tracker.update(states);

      ControlContext ctx;
      ctx.states = states;
      ctx.graph = &graph;
      ctx.potential = &params;
      ctx.gains = &scenario.gains;
      ctx.leader = scenario.leader;
      if (!scenario.obstacles.empty()) ctx.virtuals = tracker.all_virtuals();
      compute_controls(ctx, controls, options.execution, options.threads);

      StepObservation obs;
      obs.step = k;
      obs.t = t;
      obs.states = states;
      obs.controls = controls;
      obs.graph = &graph;
      obs.event = &event;
      obs.v1 = energy_V1(states, graph, potential);
      obs.v1_before_switch = k > 0 ? v1_before : obs.v1;
      obs.v2 = energy_V2(states, graph, scenario.gains.k_theta, scenario.gains.reference);
      obs.v2w = heading_lyapunov(states, graph, scenario.gains.k_theta, scenario.gains.reference);
      obs.obstacle_clearance = tracker.min_clearance();
      obs.obstacle_mode_agents = tracker.active_count();
      const StepMetrics metrics = monitor.observe(obs);
      trace.rows.push_back({t, states, controls, metrics});

      if (k == steps) break;
      integrate(states, controls, scenario.dt, next, options.execution, options.threads);
      states.swap(next);
    } catch (const FlocksimError& e) {
      trace.error = fmt::format("step {} (t = {}): {}", k, t, e.what());
      break;
    }
  }
  trace.switch_log = graph.switch_log();
  trace.report = monitor.finish();
  if (trace.error) {
    trace.report.violations.push_back(
        {ViolationKind::aborted, trace.rows.size(), trace.rows.empty() ? 0.0 : trace.rows.back().t,
         "run aborted: " + *trace.error});
  }
  return trace;
}

}  // namespace flocksim
