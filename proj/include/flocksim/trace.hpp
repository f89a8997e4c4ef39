#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "flocksim/dynamics.hpp"
#include "flocksim/monitor.hpp"
#include "flocksim/proximity_graph.hpp"

namespace flocksim {

inline constexpr int kTraceSchemaVersion = 1;
inline constexpr const char* kCodeVersion = "flocksim 1.0.0";

struct TraceHeader {
  int schema_version = kTraceSchemaVersion;
  std::string code_version = kCodeVersion;
  std::string scenario;  ///< canonical scenario text
  std::size_t agents = 0;
  double dt = 0.0;
  double horizon = 0.0;
  std::uint64_t seed = 0;
  double theta_r = 0.0;
  double r0 = 0.0;
  double R0 = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  std::optional<std::size_t> leader;
};

/// State at time t and the controls held over [t, t + dt).
struct TraceRow {
  double t = 0.0;
  std::vector<AgentState> states;
  std::vector<ControlInput> controls;
  StepMetrics metrics;
};

struct Trace {
  TraceHeader header;
  std::vector<TraceRow> rows;
  std::vector<SwitchEvent> switch_log;
  MonitorReport report;
  /// Set when the run aborted; rows then end at the last good step.
  std::optional<std::string> error;
};

/// Column names of the delimited trace: t, then x_i, y_i, theta_i, v_i, w_i, u_i,
/// tau_i for each agent i (0-based), then the per-step monitor metrics.
std::vector<std::string> trace_columns(std::size_t agents);

/// Sidecar metadata path: trace.csv -> trace.json.
std::filesystem::path sidecar_path(const std::filesystem::path& csv);

std::string trace_csv(const Trace& trace);
std::string trace_metadata(const Trace& trace);

/// Writes the delimited rows to `csv` and header/switch log/report to the sidecar.
void write_trace(const Trace& trace, const std::filesystem::path& csv);
Trace read_trace(const std::filesystem::path& csv);

}  // namespace flocksim
