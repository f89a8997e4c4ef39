#include "flocksim/plots.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <system_error>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "flocksim/errors.hpp"
#include "flocksim/geometry.hpp"

namespace flocksim {

namespace {

constexpr double kGlyphLength = 1.0;
constexpr double kPathSpacing = 0.5;       // seconds between trajectory samples
constexpr double kSnapshotSpacing = 20.0;  // seconds between heading-glyph snapshots

using AgentValue = std::function<double(const TraceRow&, std::size_t)>;

std::string per_agent_series(const Trace& trace, const char* quantity, const AgentValue& value) {
  const std::size_t n = trace.header.agents;
  fmt::memory_buffer out;
  fmt::format_to(std::back_inserter(out), "# {} per agent vs time\n# t", quantity);
  for (std::size_t i = 0; i < n; ++i) fmt::format_to(std::back_inserter(out), " {}_{}", quantity, i);
  fmt::format_to(std::back_inserter(out), "\n");
  for (const TraceRow& row : trace.rows) {
    fmt::format_to(std::back_inserter(out), "{}", row.t);
    for (std::size_t i = 0; i < n; ++i) fmt::format_to(std::back_inserter(out), " {}", value(row, i));
    fmt::format_to(std::back_inserter(out), "\n");
  }
  return fmt::to_string(out);
}

std::string min_distance_series(const Trace& trace) {
  fmt::memory_buffer out;
  fmt::format_to(std::back_inserter(out), "# minimum pairwise distance vs time\n# t d_min\n");
  for (const TraceRow& row : trace.rows)
    fmt::format_to(std::back_inserter(out), "{} {}\n", row.t, row.metrics.d_min);
  return fmt::to_string(out);
}

std::size_t stride_for(const Trace& trace, double spacing) {
  if (trace.header.dt <= 0.0) return 1;
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(spacing / trace.header.dt)));
}

// Blocks separated by two blank lines (gnuplot "index" convention): one path
// block per agent, then one snapshot block per snapshot time with x y dx dy.
std::string trajectory_series(const Trace& trace) {
  const std::size_t n = trace.header.agents;
  const std::size_t rows = trace.rows.size();
  fmt::memory_buffer out;
  fmt::format_to(std::back_inserter(out), "# trajectories: {} path blocks (x y), then snapshot blocks (x y dx dy)\n", n);
  const std::size_t path_stride = stride_for(trace, kPathSpacing);
  for (std::size_t i = 0; i < n; ++i) {
    fmt::format_to(std::back_inserter(out), "# path agent {}\n", i);
    for (std::size_t k = 0; k < rows; k += path_stride) {
      const Vec2& q = trace.rows[k].states[i].q;
      fmt::format_to(std::back_inserter(out), "{} {}\n", q.x(), q.y());
    }
    if ((rows - 1) % path_stride != 0) {
      const Vec2& q = trace.rows.back().states[i].q;
      fmt::format_to(std::back_inserter(out), "{} {}\n", q.x(), q.y());
    }
    fmt::format_to(std::back_inserter(out), "\n\n");
  }
  std::vector<std::size_t> snapshots;
  const std::size_t snap_stride = stride_for(trace, kSnapshotSpacing);
  for (std::size_t k = 0; k < rows; k += snap_stride) snapshots.push_back(k);
  if (snapshots.back() != rows - 1) snapshots.push_back(rows - 1);
  for (std::size_t k : snapshots) {
    fmt::format_to(std::back_inserter(out), "# snapshot t={}\n", trace.rows[k].t);
    for (const AgentState& s : trace.rows[k].states) {
      const Vec2 glyph = kGlyphLength * heading_vector(s.theta);
      fmt::format_to(std::back_inserter(out), "{} {} {} {}\n", s.q.x(), s.q.y(), glyph.x(), glyph.y());
    }
    fmt::format_to(std::back_inserter(out), "\n\n");
  }
  return fmt::to_string(out);
}

nlohmann::json optional_time(const std::optional<double>& t) {
  return t ? nlohmann::json(*t) : nlohmann::json(nullptr);
}

std::string summary_json(const Trace& trace, const PlotSummary& s) {
  nlohmann::json j;
  j["threshold"] = kConvergenceThreshold;
  j["convergence_time_s"] = {
      {"heading_spread", optional_time(s.heading_spread_time)},
      {"heading_error", optional_time(s.heading_error_time)},
      {"speed_spread", optional_time(s.speed_spread_time)},
      {"angular_speed", optional_time(s.angular_speed_time)},
  };
  j["d_min"] = s.d_min;
  j["u_max_abs"] = s.u_max_abs;
  j["tau_max_abs"] = s.tau_max_abs;
  j["certified"] = trace.report.certified() && !trace.error;
  j["violations"] = trace.report.violations.size();
  j["final_switch_time_s"] = trace.report.final_switch_time;
  j["rows"] = trace.rows.size();
  return j.dump(2) + "\n";
}

}  // namespace

std::optional<double> settle_time(const std::vector<double>& t, const std::vector<double>& series,
                                  double threshold) {
  std::optional<double> since;
  for (std::size_t k = 0; k < series.size(); ++k) {
    if (series[k] < threshold) {
      if (!since) since = t[k];
    } else {
      since.reset();
    }
  }
  return since;
}

PlotSummary summarize(const Trace& trace, double threshold) {
  std::vector<double> t, heading_spread, heading_error, speed_spread, angular;
  PlotSummary s;
  s.d_min = std::numeric_limits<double>::infinity();
  for (const TraceRow& row : trace.rows) {
    const StepMetrics& m = row.metrics;
    t.push_back(row.t);
    heading_spread.push_back(m.heading_spread);
    heading_error.push_back(m.heading_error);
    speed_spread.push_back(m.speed_spread);
    angular.push_back(m.angular_speed_max);
    s.d_min = std::min(s.d_min, m.d_min);
    s.u_max_abs = std::max(s.u_max_abs, m.u_max_abs);
    s.tau_max_abs = std::max(s.tau_max_abs, m.tau_max_abs);
  }
  s.heading_spread_time = settle_time(t, heading_spread, threshold);
  s.heading_error_time = settle_time(t, heading_error, threshold);
  s.speed_spread_time = settle_time(t, speed_spread, threshold);
  s.angular_speed_time = settle_time(t, angular, threshold);
  return s;
}

std::vector<std::string> plot_file_names() {
  return {"heading.dat",        "speed.dat",        "angular_speed.dat", "speed_control.dat",
          "steering_control.dat", "min_distance.dat", "trajectory.dat",   "summary.json"};
}

std::vector<std::filesystem::path> emit_plots(const Trace& trace,
                                              const std::filesystem::path& outdir) {
  if (trace.rows.empty()) throw FlocksimError("cannot plot an empty trace");

  const auto names = plot_file_names();
  const std::vector<std::string> contents{
      per_agent_series(trace, "theta", [](const TraceRow& r, std::size_t i) { return r.states[i].theta; }),
      per_agent_series(trace, "v", [](const TraceRow& r, std::size_t i) { return r.states[i].v; }),
      per_agent_series(trace, "w", [](const TraceRow& r, std::size_t i) { return r.states[i].w; }),
      per_agent_series(trace, "u", [](const TraceRow& r, std::size_t i) { return r.controls[i].u; }),
      per_agent_series(trace, "tau", [](const TraceRow& r, std::size_t i) { return r.controls[i].tau; }),
      min_distance_series(trace),
      trajectory_series(trace),
      summary_json(trace, summarize(trace)),
  };

  std::error_code ec;
  std::filesystem::create_directories(outdir, ec);
  if (ec) throw FlocksimError(fmt::format("cannot create '{}': {}", outdir.string(), ec.message()));

  std::vector<std::filesystem::path> written;
  for (std::size_t f = 0; f < names.size(); ++f) {
    const auto path = outdir / names[f];
    std::ofstream out(path, std::ios::binary);
    if (out) out << contents[f];
    if (!out) {
      for (const auto& p : written) std::filesystem::remove(p, ec);
      throw FlocksimError(fmt::format("cannot write '{}'", path.string()));
    }
    written.push_back(path);
  }
  return written;
}

}  // namespace flocksim
