// Serial reference vs OpenMP kernels on a square lattice of agents.

#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "flocksim/kernels.hpp"
#include "flocksim/potential.hpp"
#include "flocksim/proximity_graph.hpp"

using namespace flocksim;

namespace {

struct Fixture {
  std::vector<AgentState> states;
  ProximityGraph graph;
  PotentialParams potential = calibrate({1.0, 3.0, 6.0, 8.0}, 15.0);
  ControlGains gains;
  std::vector<ControlInput> controls;
  std::vector<AgentState> next;

  explicit Fixture(std::size_t n) : controls(n), next(n) {
    const auto side = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    for (std::size_t i = 0; i < n; ++i) {
      // Spacing 4.2 puts lattice neighbours and diagonals inside the link radius.
      const double x = 4.2 * static_cast<double>(i % side);
      const double y = 4.2 * static_cast<double>(i / side);
      states.push_back({Vec2(x, y), 0.1 * static_cast<double>(i % 7), 0.3, 0.0});
    }
    std::vector<Vec2> q;
    for (const auto& s : states) q.push_back(s.q);
    graph = ProximityGraph::initial(q, GraphParams{});
    gains.reference.theta = 1.5707963267948966;
  }

  ControlContext context() const {
    ControlContext ctx;
    ctx.states = states;
    ctx.graph = &graph;
    ctx.potential = &potential;
    ctx.gains = &gains;
    return ctx;
  }
};

void run_step(benchmark::State& state, Execution ex) {
  Fixture f(static_cast<std::size_t>(state.range(0)));
  const ControlContext ctx = f.context();
  for (auto _ : state) {
    compute_controls(ctx, f.controls, ex);
    integrate(f.states, f.controls, 0.01, f.next, ex);
    benchmark::DoNotOptimize(f.next.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_StepSerial(benchmark::State& state) { run_step(state, Execution::serial); }
void BM_StepParallel(benchmark::State& state) { run_step(state, Execution::parallel); }

}  // namespace

BENCHMARK(BM_StepSerial)->Arg(15)->Arg(60)->Arg(240);
BENCHMARK(BM_StepParallel)->Arg(15)->Arg(60)->Arg(240)->UseRealTime();

BENCHMARK_MAIN();
