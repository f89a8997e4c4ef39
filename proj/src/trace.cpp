#include "flocksim/trace.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "flocksim/errors.hpp"

namespace flocksim {

namespace {

constexpr std::size_t kAgentColumns = 7;
const char* const kMetricColumns[] = {
    "d_min", "V1", "V2", "V2w", "speed_spread", "heading_spread", "heading_error",
    "angular_speed_max", "u_max_abs", "tau_max_abs", "connected", "edge_count",
    "edges_added", "edges_removed", "obstacle_clearance", "obstacle_mode_agents",
};
constexpr std::size_t kMetricCount = std::size(kMetricColumns);

double parse_double(std::string_view field, std::size_t line) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw FlocksimError(fmt::format("trace line {}: bad number '{}'", line, field));
  return value;
}

nlohmann::json edges_json(const std::vector<Edge>& edges) {
  auto out = nlohmann::json::array();
  for (const auto& [i, j] : edges) out.push_back({i, j});
  return out;
}

std::vector<Edge> edges_from(const nlohmann::json& j) {
  std::vector<Edge> out;
  for (const auto& e : j) out.emplace_back(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>());
  return out;
}

ViolationKind kind_from(const std::string& name) {
  for (auto k : {ViolationKind::collision, ViolationKind::cohesion, ViolationKind::energy_increase,
                 ViolationKind::lyapunov_increase, ViolationKind::connectivity,
                 ViolationKind::input_bound, ViolationKind::obstacle_collision,
                 ViolationKind::aborted})
    if (name == to_string(k)) return k;
  throw FlocksimError("unknown violation kind '" + name + "' in trace metadata");
}

// JSON has no infinity; store it as null.
nlohmann::json finite_or_null(double x) {
  return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

double from_nullable(const nlohmann::json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

}  // namespace

std::vector<std::string> trace_columns(std::size_t agents) {
  std::vector<std::string> cols{"t"};
  for (std::size_t i = 0; i < agents; ++i)
    for (const char* name : {"x", "y", "theta", "v", "w", "u", "tau"})
      cols.push_back(fmt::format("{}_{}", name, i));
  for (const char* name : kMetricColumns) cols.emplace_back(name);
  return cols;
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv) {
  auto p = csv;
  p.replace_extension(".json");
  return p;
}

std::string trace_csv(const Trace& trace) {
  fmt::memory_buffer out;
  fmt::format_to(std::back_inserter(out), "{}\n",
                 fmt::join(trace_columns(trace.header.agents), ","));
  for (const TraceRow& row : trace.rows) {
    fmt::format_to(std::back_inserter(out), "{}", row.t);
    for (std::size_t i = 0; i < row.states.size(); ++i) {
      const AgentState& s = row.states[i];
      const ControlInput& c = row.controls[i];
      fmt::format_to(std::back_inserter(out), ",{},{},{},{},{},{},{}", s.q.x(), s.q.y(), s.theta,
                     s.v, s.w, c.u, c.tau);
    }
    const StepMetrics& m = row.metrics;
    fmt::format_to(std::back_inserter(out), ",{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                   m.d_min, m.V1, m.V2, m.V2w, m.speed_spread, m.heading_spread, m.heading_error,
                   m.angular_speed_max, m.u_max_abs, m.tau_max_abs, m.connected ? 1 : 0,
                   m.edge_count, m.edges_added, m.edges_removed, m.obstacle_clearance,
                   m.obstacle_mode_agents);
  }
  return fmt::to_string(out);
}

std::string trace_metadata(const Trace& trace) {
  const TraceHeader& h = trace.header;
  nlohmann::json j;
  j["schema_version"] = h.schema_version;
  j["code_version"] = h.code_version;
  j["scenario"] = h.scenario;
  j["agents"] = h.agents;
  j["dt_s"] = h.dt;
  j["horizon_s"] = h.horizon;
  j["seed"] = h.seed;
  j["theta_r_rad"] = h.theta_r;
  j["r0_m"] = h.r0;
  j["R0_m"] = h.R0;
  j["p1"] = h.p1;
  j["p2"] = h.p2;
  j["leader_index"] = h.leader ? nlohmann::json(*h.leader) : nlohmann::json(nullptr);
  j["rows"] = trace.rows.size();
  j["columns"] = trace_columns(h.agents);

  auto log = nlohmann::json::array();
  for (const SwitchEvent& e : trace.switch_log)
    log.push_back({{"t", e.t}, {"added", edges_json(e.added)}, {"removed", edges_json(e.removed)}});
  j["switch_log"] = log;

  const MonitorReport& r = trace.report;
  nlohmann::json report;
  report["certified"] = r.certified();
  report["steps"] = r.steps;
  report["initial_edges"] = r.initial_edges;
  report["added_edges"] = r.added_edges;
  report["removed_edges"] = r.removed_edges;
  report["switch_count"] = r.switch_count;
  report["final_switch_time_s"] = r.final_switch_time;
  report["d_min"] = finite_or_null(r.d_min);
  report["obstacle_clearance"] = finite_or_null(r.obstacle_clearance);
  report["u_max_abs"] = r.u_max_abs;
  report["tau_max_abs"] = r.tau_max_abs;
  report["max_v1_increase"] = r.max_v1_increase;
  report["max_v1_jump_excess"] = r.max_v1_jump_excess;
  report["max_v2_increase"] = r.max_v2_increase;
  report["max_v2w_increase"] = r.max_v2w_increase;
  auto violations = nlohmann::json::array();
  for (const Violation& v : r.violations)
    violations.push_back(
        {{"kind", to_string(v.kind)}, {"step", v.step}, {"t", v.t}, {"detail", v.detail}});
  report["violations"] = violations;
  j["report"] = report;
  j["error"] = trace.error ? nlohmann::json(*trace.error) : nlohmann::json(nullptr);
  return j.dump(2) + "\n";
}

void write_trace(const Trace& trace, const std::filesystem::path& csv) {
  auto write = [](const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FlocksimError(fmt::format("cannot write '{}'", path.string()));
    out << text;
    if (!out) throw FlocksimError(fmt::format("write to '{}' failed", path.string()));
  };
  write(csv, trace_csv(trace));
  write(sidecar_path(csv), trace_metadata(trace));
}

Trace read_trace(const std::filesystem::path& csv) {
  std::ifstream meta_in(sidecar_path(csv));
  if (!meta_in) throw FlocksimError(fmt::format("missing trace metadata '{}'", sidecar_path(csv).string()));
  nlohmann::json j;
  try {
    meta_in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FlocksimError(fmt::format("bad trace metadata: {}", e.what()));
  }

  Trace trace;
  try {
    TraceHeader& h = trace.header;
    h.schema_version = j.at("schema_version").get<int>();
    if (h.schema_version != kTraceSchemaVersion)
      throw FlocksimError(fmt::format("unsupported trace schema version {}", h.schema_version));
    h.code_version = j.at("code_version").get<std::string>();
    h.scenario = j.at("scenario").get<std::string>();
    h.agents = j.at("agents").get<std::size_t>();
    h.dt = j.at("dt_s").get<double>();
    h.horizon = j.at("horizon_s").get<double>();
    h.seed = j.at("seed").get<std::uint64_t>();
    h.theta_r = j.at("theta_r_rad").get<double>();
    h.r0 = j.at("r0_m").get<double>();
    h.R0 = j.at("R0_m").get<double>();
    h.p1 = j.at("p1").get<double>();
    h.p2 = j.at("p2").get<double>();
    if (!j.at("leader_index").is_null()) h.leader = j.at("leader_index").get<std::size_t>();
    for (const auto& e : j.at("switch_log"))
      trace.switch_log.push_back(
          {e.at("t").get<double>(), edges_from(e.at("added")), edges_from(e.at("removed"))});
    const auto& r = j.at("report");
    MonitorReport& rep = trace.report;
    rep.steps = r.at("steps").get<std::size_t>();
    rep.initial_edges = r.at("initial_edges").get<std::size_t>();
    rep.added_edges = r.at("added_edges").get<std::size_t>();
    rep.removed_edges = r.at("removed_edges").get<std::size_t>();
    rep.switch_count = r.at("switch_count").get<std::size_t>();
    rep.final_switch_time = r.at("final_switch_time_s").get<double>();
    rep.d_min = from_nullable(r.at("d_min"));
    rep.obstacle_clearance = from_nullable(r.at("obstacle_clearance"));
    rep.u_max_abs = r.at("u_max_abs").get<double>();
    rep.tau_max_abs = r.at("tau_max_abs").get<double>();
    rep.max_v1_increase = r.at("max_v1_increase").get<double>();
    rep.max_v1_jump_excess = r.at("max_v1_jump_excess").get<double>();
    rep.max_v2_increase = r.at("max_v2_increase").get<double>();
    rep.max_v2w_increase = r.at("max_v2w_increase").get<double>();
    for (const auto& v : r.at("violations"))
      rep.violations.push_back({kind_from(v.at("kind").get<std::string>()),
                                v.at("step").get<std::size_t>(), v.at("t").get<double>(),
                                v.at("detail").get<std::string>()});
    if (!j.at("error").is_null()) trace.error = j.at("error").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw FlocksimError(fmt::format("bad trace metadata: {}", e.what()));
  }

  std::ifstream in(csv);
  if (!in) throw FlocksimError(fmt::format("cannot open trace '{}'", csv.string()));
  const std::size_t n = trace.header.agents;
  const std::size_t width = 1 + kAgentColumns * n + kMetricCount;
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> fields;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) {
      if (line != fmt::format("{}", fmt::join(trace_columns(n), ",")))
        throw FlocksimError("trace header does not match the metadata agent count");
      continue;
    }
    if (line.empty()) continue;
    fields.clear();
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      fields.push_back(parse_double(rest.substr(0, comma), line_no));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (fields.size() != width)
      throw FlocksimError(fmt::format("trace line {}: expected {} fields, got {}", line_no, width,
                                      fields.size()));
    TraceRow row;
    row.t = fields[0];
    row.states.resize(n);
    row.controls.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double* f = &fields[1 + kAgentColumns * i];
      row.states[i] = {Vec2(f[0], f[1]), f[2], f[3], f[4]};
      row.controls[i] = {f[5], f[6]};
    }
    const double* f = &fields[1 + kAgentColumns * n];
    StepMetrics& m = row.metrics;
    m.t = row.t;
    m.d_min = f[0];
    m.V1 = f[1];
    m.V2 = f[2];
    m.V2w = f[3];
    m.speed_spread = f[4];
    m.heading_spread = f[5];
    m.heading_error = f[6];
    m.angular_speed_max = f[7];
    m.u_max_abs = f[8];
    m.tau_max_abs = f[9];
    m.connected = f[10] != 0.0;
    m.edge_count = static_cast<std::size_t>(f[11]);
    m.edges_added = static_cast<std::size_t>(f[12]);
    m.edges_removed = static_cast<std::size_t>(f[13]);
    m.obstacle_clearance = f[14];
    m.obstacle_mode_agents = static_cast<std::size_t>(f[15]);
    trace.rows.push_back(std::move(row));
  }
  return trace;
}

}  // namespace flocksim
