// flocksim command-line driver.
//   flocksim run <scenario> --out <dir> [--seed S] [--dt X] [--T Y] [--threads N] [--serial]
//   flocksim validate <scenario>
//   flocksim plots <trace.csv> --out <dir>
// Exit status: 0 certified, 2 monitor violations, 1 error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "flocksim/errors.hpp"
#include "flocksim/plots.hpp"
#include "flocksim/scenario.hpp"
#include "flocksim/simulation.hpp"
#include "flocksim/trace.hpp"

namespace {

constexpr int kCertified = 0;
constexpr int kError = 1;
constexpr int kViolations = 2;

void print_optional(const char* label, const std::optional<double>& t) {
  if (t)
    fmt::print("  {:<16} {:.2f} s\n", label, *t);
  else
    fmt::print("  {:<16} not reached\n", label);
}

void print_report(const flocksim::Trace& trace) {
  const auto& r = trace.report;
  const auto s = flocksim::summarize(trace);
  fmt::print("steps {}  edges {} -> {}  switches {}  final switch {:.2f} s\n", trace.rows.size(),
             r.initial_edges, r.initial_edges + r.added_edges - r.removed_edges, r.switch_count,
             r.final_switch_time);
  fmt::print("d_min {:.6f}  |u|max {:.6f}  |tau|max {:.6f}\n", r.d_min, r.u_max_abs, r.tau_max_abs);
  if (std::isfinite(r.obstacle_clearance))
    fmt::print("obstacle clearance {:.6f}\n", r.obstacle_clearance);
  fmt::print("settled below {}:\n", flocksim::kConvergenceThreshold);
  print_optional("heading spread", s.heading_spread_time);
  print_optional("heading error", s.heading_error_time);
  print_optional("speed spread", s.speed_spread_time);
  print_optional("angular speed", s.angular_speed_time);
  for (const auto& v : r.violations)
    fmt::print("violation {} at step {} (t = {}): {}\n", flocksim::to_string(v.kind), v.step, v.t,
               v.detail);
  fmt::print("{}\n", r.certified() ? "certified" : fmt::format("{} violation(s)", r.violations.size()));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flocking simulator for unicycle double-integrator agents"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::optional<double> horizon;
  int threads = 0;
  bool serial = false;

  auto* run_cmd = app.add_subcommand("run", "Run a scenario and write trace.csv/trace.json");
  run_cmd->add_option("scenario", scenario_path, "Scenario file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--out", out_dir, "Output directory")->required();
  run_cmd->add_option("--seed", seed, "Override the scenario seed");
  run_cmd->add_option("--dt", dt, "Override the step size [s]");
  run_cmd->add_option("--T", horizon, "Override the horizon [s]");
  run_cmd->add_option("--threads", threads, "Worker threads (0: OpenMP default)");
  run_cmd->add_flag("--serial", serial, "Use the serial reference kernels");

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check a scenario without running it");
  validate_cmd->add_option("scenario", validate_path, "Scenario file")->required()->check(CLI::ExistingFile);

  std::string trace_path;
  std::string plots_dir;
  auto* plots_cmd = app.add_subcommand("plots", "Write plot series and a summary from a trace");
  plots_cmd->add_option("trace", trace_path, "Trace file (trace.csv)")->required()->check(CLI::ExistingFile);
  plots_cmd->add_option("--out", plots_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kCertified : kError;
  }

  try {
    if (*run_cmd) {
      auto scenario = flocksim::load_scenario(scenario_path);
      if (seed) scenario.seed = *seed;
      if (dt) scenario.dt = *dt;
      if (horizon) scenario.horizon = *horizon;
      flocksim::RunOptions options;
      options.execution = serial ? flocksim::Execution::serial : flocksim::Execution::parallel;
      options.threads = threads;
      const auto trace = flocksim::run(scenario, options);
      std::filesystem::create_directories(out_dir);
      const auto csv = std::filesystem::path(out_dir) / "trace.csv";
      flocksim::write_trace(trace, csv);
      print_report(trace);
      if (trace.error) {
        fmt::print(stderr, "error: {}\n", *trace.error);
        return kError;
      }
      return trace.report.certified() ? kCertified : kViolations;
    }
    if (*validate_cmd) {
      const auto scenario = flocksim::load_scenario(validate_path);
      flocksim::validate(scenario);
      const auto p = scenario.potential();
      fmt::print("ok: {} agents, p1 = {}, p2 = {}, {} steps\n", scenario.agents, p.p1, p.p2,
                 scenario.step_count());
      return kCertified;
    }
    if (*plots_cmd) {
      const auto trace = flocksim::read_trace(trace_path);
      for (const auto& f : flocksim::emit_plots(trace, plots_dir)) fmt::print("{}\n", f.string());
      return kCertified;
    }
  } catch (const flocksim::ScenarioError& e) {
    fmt::print(stderr, "scenario rejected [{}]: {}\n", e.code(), e.what());
    return kError;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kError;
  }
  return kError;
}
