// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only when all pass.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "flocksim/control.hpp"
#include "flocksim/dynamics.hpp"
#include "flocksim/metrics.hpp"
#include "flocksim/plots.hpp"
#include "flocksim/potential.hpp"
#include "flocksim/proximity_graph.hpp"
#include "flocksim/scenario.hpp"
#include "flocksim/simulation.hpp"

using namespace flocksim;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kSeeds = 10;
constexpr double kThreshold = 1e-2;

struct Verdict {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& why) {
    if (!ok) {
      pass = false;
      if (notes.size() < 6) notes.push_back(why);
    }
  }
};

struct Series {
  std::vector<double> t, heading_spread, heading_error, speed_spread, angular;
};

Series series_of(const Trace& trace) {
  Series s;
  for (const TraceRow& r : trace.rows) {
    s.t.push_back(r.t);
    s.heading_spread.push_back(r.metrics.heading_spread);
    s.heading_error.push_back(r.metrics.heading_error);
    s.speed_spread.push_back(r.metrics.speed_spread);
    s.angular.push_back(r.metrics.angular_speed_max);
  }
  return s;
}

bool settles_by(const std::vector<double>& t, const std::vector<double>& x, double deadline) {
  const auto when = settle_time(t, x, kThreshold);
  return when && *when <= deadline;
}

std::string time_or_never(const std::vector<double>& t, const std::vector<double>& x) {
  const auto when = settle_time(t, x, kThreshold);
  return when ? fmt::format("{:.2f} s", *when) : "never";
}

// Safety from raw positions: pairwise separation and linked-pair length, with the
// link set rebuilt from the initial rule and the recorded switch log.
void check_safety(const Trace& trace, const Scenario& sc, const std::string& tag, Verdict& v) {
  v.require(!trace.error.has_value(), tag + ": run aborted");
  v.require(trace.report.certified(),
            fmt::format("{}: {} monitor violation(s){}", tag, trace.report.violations.size(),
                        trace.report.violations.empty()
                            ? ""
                            : " first: " + std::string(to_string(trace.report.violations[0].kind))));
  std::vector<Vec2> q;
  for (const auto& s : trace.rows.front().states) q.push_back(s.q);
  ProximityGraph g = ProximityGraph::initial(q, sc.graph);
  std::size_t next_event = 0;
  const auto& log = trace.switch_log;
  for (const TraceRow& row : trace.rows) {
    while (next_event < log.size() && log[next_event].t <= row.t) {
      for (const Edge& e : log[next_event].added) g.add_edge(e.first, e.second);
      for (const Edge& e : log[next_event].removed) g.remove_edge(e.first, e.second);
      ++next_event;
    }
    const std::size_t n = row.states.size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const double d = (row.states[i].q - row.states[j].q).norm();
        if (!(d > 1.0)) {
          v.require(false, fmt::format("{}: agents {},{} at {} (t = {})", tag, i, j, d, row.t));
          return;
        }
        if (g.has_edge(i, j) && !(d < 8.0)) {
          v.require(false, fmt::format("{}: link {},{} stretched to {} (t = {})", tag, i, j, d, row.t));
          return;
        }
      }
  }
}

void report(int id, const std::string& title, const Verdict& v) {
  fmt::print("criterion {}: {} - {}\n", id, v.pass ? "PASS" : "FAIL", title);
  for (const auto& n : v.notes) fmt::print("    {}\n", n);
}

Verdict property_suites() {
  Verdict v;
  std::mt19937_64 gen(2024);

  std::uniform_real_distribution<double> val(-3.0, 3.0), dens(0.05, 0.9);
  std::uniform_int_distribution<int> size(1, 25);
  const Saturation sigma{0.5, 0.5, 0.5};
  const auto sat = [&](double x) { return sigma(x); };
  int identity_failures = 0;
  for (int k = 0; k < 1000; ++k) {
    const std::size_t n = static_cast<std::size_t>(size(gen));
    std::bernoulli_distribution coin(dens(gen));
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (coin(gen)) edges.emplace_back(i, j);
    const ProximityGraph g(n, edges);
    std::vector<double> a(n), b(n);
    for (auto& x : a) x = val(gen);
    for (auto& x : b) x = val(gen);
    if (!check_neighbor_sum_identity(g, a, b, sat, 1e-12) || !check_linear_sum_identity(g, a, b, 1e-12)) ++identity_failures;
  }
  v.require(identity_failures == 0, fmt::format("{} neighbor-sum identity failures", identity_failures));

  std::uniform_real_distribution<double> wide(-5.0, 5.0);
  int product_failures = 0;
  for (int k = 0; k < 100000; ++k)
    if (!saturation_product_nonnegative(sigma, wide(gen), wide(gen))) ++product_failures;
  v.require(product_failures == 0, fmt::format("{} saturation-product failures", product_failures));

  const PotentialParams p = calibrate({1.0, 3.0, 6.0, 8.0}, 15.0);
  const Potential pot(p);
  double range_violation = 0.0, fd_error = 0.0;
  for (int k = 0; k <= 10000; ++k) {
    const double r = 12.0 * k / 10000.0;
    const double u = pot.value(r);
    range_violation = std::max({range_violation, -u, u - 15.0});
  }
  for (int k = 0; k < 1000; ++k) {
    const double r = 1.01 + (7.98 - 1.01) * k / 999.0;
    const double h = 1e-5;
    fd_error = std::max(fd_error, std::abs((pot.value(r + h) - pot.value(r - h)) / (2 * h) - phi(r, p)));
  }
  v.require(range_violation <= 0.0, fmt::format("U leaves [0, U_M] by {}", range_violation));
  v.require(fd_error <= 1e-6, fmt::format("dU/dr differs from phi by {}", fd_error));
  v.require(std::abs(pot.value(1.0 + 1e-9) - 15.0) <= 1e-8 && std::abs(pot.value(8.0 - 1e-9) - 15.0) <= 1e-8,
            "U does not return to U_M at the lobe ends");
  v.require(std::abs(pot.value(3.0)) <= 1e-9, "U(a) is not zero");

  auto circle = [](int n, double t) {
    AgentState s;
    s.v = 1.0;
    s.w = 1.0;
    for (int k = 0; k < n; ++k) s = rk4_step(s, {}, t / n);
    return (s.q - Vec2(std::sin(t), 1.0 - std::cos(t))).norm();
  };
  const double closure = circle(628, 2.0 * kPi);
  v.require(closure <= 1e-8, fmt::format("circle closure error {}", closure));
  const double slope = std::log(circle(10, 1.5) / circle(100, 1.5)) / std::log(10.0);
  v.require(slope >= 3.7 && slope <= 4.3, fmt::format("convergence slope {}", slope));
  return v;
}

}  // namespace

int main() {
  std::vector<Scenario> free_scenarios, obstacle_scenarios;
  std::vector<Trace> free_runs, obstacle_runs;
  for (int seed = 0; seed < kSeeds; ++seed) {
    free_scenarios.push_back(free_flock_scenario(seed));
    obstacle_scenarios.push_back(obstacle_scenario(seed));
    free_runs.push_back(run(free_scenarios.back()));
    obstacle_runs.push_back(run(obstacle_scenarios.back()));
  }
  const std::size_t n = free_scenarios[0].agents;
  const PotentialParams p = free_scenarios[0].potential();
  const ControlGains& gains = free_scenarios[0].gains;
  const double u_bound = static_cast<double>(n - 1) * (p.max_force() + gains.sigma1.bound);
  const double tau_bound = gains.sigma2.bound + 2.0 * kPi * gains.k_theta;

  Verdict c1;
  for (int s = 0; s < kSeeds; ++s) {
    const Series x = series_of(free_runs[s]);
    const bool ok = settles_by(x.t, x.heading_spread, 60.0) && settles_by(x.t, x.heading_error, 60.0) &&
                    settles_by(x.t, x.speed_spread, 60.0) && settles_by(x.t, x.angular, 60.0);
    c1.require(ok, fmt::format("seed {}: heading spread {}, heading error {}, speed spread {}, angular speed {}",
                               s, time_or_never(x.t, x.heading_spread), time_or_never(x.t, x.heading_error),
                               time_or_never(x.t, x.speed_spread), time_or_never(x.t, x.angular)));
  }
  report(1, "free flock converges by 60 s on seeds 0-9", c1);

  Verdict c2;
  for (int s = 0; s < kSeeds; ++s) {
    check_safety(free_runs[s], free_scenarios[s], fmt::format("free seed {}", s), c2);
    check_safety(obstacle_runs[s], obstacle_scenarios[s], fmt::format("obstacle seed {}", s), c2);
  }
  report(2, "separation above r0, links below R0, no monitor violations", c2);

  Verdict c3;
  for (int s = 0; s < kSeeds; ++s) {
    const Trace& t = free_runs[s];
    for (std::size_t k = 1; k < t.rows.size(); ++k) {
      const double prev = t.rows[k - 1].metrics.V1;
      const double rise = t.rows[k].metrics.V1 - prev;
      const double allowance = 1e-6 * (1.0 + prev) + (t.rows[k].metrics.edges_added > 0 ? 1e-9 : 0.0);
      if (rise > allowance) {
        c3.require(false, fmt::format("seed {}: V1 rose by {} at t = {}", s, rise, t.rows[k].t));
        break;
      }
    }
    c3.require(t.report.max_v1_jump_excess <= 1e-9,
               fmt::format("seed {}: link-addition jump excess {}", s, t.report.max_v1_jump_excess));
  }
  report(3, "V1 descends between switches, addition jumps within 1e-9", c3);

  Verdict c4;
  for (int s = 0; s < kSeeds; ++s) {
    const Trace& t = free_runs[s];
    std::size_t edges = t.rows.front().metrics.edge_count;
    for (const TraceRow& row : t.rows) {
      c4.require(row.metrics.connected, fmt::format("seed {}: disconnected at t = {}", s, row.t));
      c4.require(row.metrics.edge_count >= edges, fmt::format("seed {}: edge count fell at t = {}", s, row.t));
      edges = row.metrics.edge_count;
      if (row.t > t.report.final_switch_time)
        c4.require(row.metrics.edges_added + row.metrics.edges_removed == 0,
                   fmt::format("seed {}: switch after the final switch time", s));
    }
    c4.require(t.switch_log.size() == t.report.switch_count && t.report.final_switch_time < t.header.horizon,
               fmt::format("seed {}: switch log inconsistent", s));
  }
  report(4, "connected throughout, edge set grows then freezes", c4);

  Verdict c5;
  for (const auto* runs : {&free_runs, &obstacle_runs})
    for (const Trace& t : *runs)
      for (const TraceRow& row : t.rows) {
        if (row.metrics.u_max_abs > u_bound || row.metrics.tau_max_abs > tau_bound) {
          c5.require(false, fmt::format("|u| = {}, |tau| = {} at t = {}", row.metrics.u_max_abs,
                                        row.metrics.tau_max_abs, row.t));
          break;
        }
      }
  const fs::path plot_dir = fs::temp_directory_path() / "flocksim_acceptance_plots";
  fs::remove_all(plot_dir);
  emit_plots(free_runs[0], plot_dir);
  for (const char* f : {"speed_control.dat", "steering_control.dat"})
    c5.require(fs::is_regular_file(plot_dir / f), fmt::format("missing plot file {}", f));
  fs::remove_all(plot_dir);
  report(5, fmt::format("inputs within |u| <= {:.4f}, |tau| <= {:.4f}", u_bound, tau_bound), c5);

  Verdict c6;
  for (int s = 0; s < kSeeds; ++s) {
    const Trace& t = obstacle_runs[s];
    double clearance = std::numeric_limits<double>::infinity();
    for (const TraceRow& row : t.rows) clearance = std::min(clearance, row.metrics.obstacle_clearance);
    c6.require(clearance > 0.0, fmt::format("seed {}: obstacle clearance {}", s, clearance));
    const Series x = series_of(t);
    const bool ok = settles_by(x.t, x.heading_error, 80.0) && settles_by(x.t, x.heading_spread, 80.0) &&
                    settles_by(x.t, x.speed_spread, 70.0);
    c6.require(ok, fmt::format("seed {}: heading error {}, heading spread {}, speed spread {}, clearance {:.2f}",
                               s, time_or_never(x.t, x.heading_error), time_or_never(x.t, x.heading_spread),
                               time_or_never(x.t, x.speed_spread), clearance));
    check_safety(t, obstacle_scenarios[s], fmt::format("obstacle seed {}", s), c6);
  }
  report(6, "obstacle run: clear of the obstacle, headings by 80 s, speeds by 70 s", c6);

  const Verdict c7 = property_suites();
  report(7, "neighbor-sum identities, saturation product, potential and integrator properties", c7);

  Verdict c8;
  const std::string one = trace_csv(run(free_scenarios[3], {Execution::parallel, 1}));
  const std::string four = trace_csv(run(free_scenarios[3], {Execution::parallel, 4}));
  c8.require(one == four, "traces differ between 1 and 4 threads");
  report(8, "bit-identical traces across thread counts", c8);

  const bool all = c1.pass && c2.pass && c3.pass && c4.pass && c5.pass && c6.pass && c7.pass && c8.pass;
  return all ? 0 : 1;
}
