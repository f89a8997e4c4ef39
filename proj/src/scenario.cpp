#include "flocksim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "flocksim/errors.hpp"
#include "flocksim/metrics.hpp"

namespace flocksim {

namespace {

const std::set<std::string> kKnownKeys = {
    "agents", "seed", "dt_s", "horizon_s",
    "r0_m", "a_m", "A_m", "R0_m", "U_max", "p1", "p2",
    "R_m", "eps1_m", "eps2_m",
    "k_theta_per_s2", "theta_r_rad", "theta_r_rate_radps", "theta_r_accel_radps2",
    "sigma1_L", "sigma1_M", "sigma1_knee", "sigma2_L", "sigma2_M", "sigma2_knee",
    "placement", "placement_z",
    "initial_speed_min_mps", "initial_speed_max_mps",
    "initial_heading_min_rad", "initial_heading_max_rad",
    "positions_m", "headings_rad", "speeds_mps", "angular_speeds_radps",
    "leader_index", "leader_speed_mps", "obstacles_m",
};

[[noreturn]] void schema_error(const std::string& what) { throw ScenarioError("schema", what); }

template <typename T>
T scalar(const YAML::Node& root, const std::string& key, T fallback) {
  const YAML::Node node = root[key];
  if (!node) return fallback;
  if (!node.IsScalar()) schema_error(fmt::format("key '{}' must be a scalar", key));
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    schema_error(fmt::format("key '{}' has the wrong type", key));
  }
}

std::vector<double> number_list(const YAML::Node& root, const std::string& key) {
  const YAML::Node node = root[key];
  if (!node) return {};
  if (!node.IsSequence()) schema_error(fmt::format("key '{}' must be a list", key));
  std::vector<double> out;
  for (const auto& item : node) {
    try {
      out.push_back(item.as<double>());
    } catch (const YAML::Exception&) {
      schema_error(fmt::format("key '{}' must contain numbers", key));
    }
  }
  return out;
}

std::vector<std::vector<double>> tuple_list(const YAML::Node& root, const std::string& key,
                                            std::size_t arity) {
  const YAML::Node node = root[key];
  if (!node) return {};
  if (!node.IsSequence()) schema_error(fmt::format("key '{}' must be a list", key));
  std::vector<std::vector<double>> out;
  for (const auto& item : node) {
    if (!item.IsSequence() || item.size() != arity)
      schema_error(fmt::format("entries of '{}' must be {}-element lists", key, arity));
    std::vector<double> row;
    for (const auto& v : item) {
      try {
        row.push_back(v.as<double>());
      } catch (const YAML::Exception&) {
        schema_error(fmt::format("key '{}' must contain numbers", key));
      }
    }
    out.push_back(std::move(row));
  }
  return out;
}

double uniform(std::mt19937_64& gen, Interval range) {
  // 53 high bits -> [0, 1), identical on every standard library.
  const double unit = static_cast<double>(gen() >> 11) * 0x1.0p-53;
  return range.lo + (range.hi - range.lo) * unit;
}

[[noreturn]] void invalid(const std::string& what) { throw ScenarioError("invalid_parameter", what); }

}  // namespace

PotentialParams Scenario::potential() const {
  if (p1.has_value() != p2.has_value()) invalid("p1 and p2 must be given together");
  if (!p1) {
    try {
      return calibrate(geometry, u_max);
    } catch (const std::invalid_argument& e) {
      invalid(e.what());
    }
  }
  PotentialParams p{geometry.r0, geometry.a, geometry.A, geometry.R0, u_max, *p1, *p2};
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    invalid(e.what());
  }
  // Explicit amplitudes must still meet U(a) = 0 and U(R0) = u_max.
  const PotentialParams reference = calibrate(geometry, u_max);
  if (std::abs(p.p1 - reference.p1) > 1e-9 * std::abs(reference.p1) ||
      std::abs(p.p2 - reference.p2) > 1e-9 * reference.p2)
    invalid(fmt::format("explicit p1/p2 do not calibrate U (expected {} and {})", reference.p1,
                        reference.p2));
  return p;
}

std::size_t Scenario::step_count() const {
  const double ratio = horizon / dt;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest))
    return static_cast<std::size_t>(nearest);
  return static_cast<std::size_t>(std::floor(ratio));
}

Scenario parse_scenario(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    schema_error(fmt::format("unparseable scenario: {}", e.what()));
  }
  if (!root || root.IsNull()) return Scenario{};
  if (!root.IsMap()) schema_error("scenario must be a key/value mapping");
  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    if (!kKnownKeys.count(key)) schema_error(fmt::format("unknown key '{}'", key));
  }

  Scenario s;
  s.agents = scalar<std::size_t>(root, "agents", s.agents);
  s.seed = scalar<std::uint64_t>(root, "seed", s.seed);
  s.dt = scalar<double>(root, "dt_s", s.dt);
  s.horizon = scalar<double>(root, "horizon_s", s.horizon);
  s.geometry.r0 = scalar<double>(root, "r0_m", s.geometry.r0);
  s.geometry.a = scalar<double>(root, "a_m", s.geometry.a);
  s.geometry.A = scalar<double>(root, "A_m", s.geometry.A);
  s.geometry.R0 = scalar<double>(root, "R0_m", s.geometry.R0);
  s.u_max = scalar<double>(root, "U_max", s.u_max);
  if (root["p1"]) s.p1 = scalar<double>(root, "p1", 0.0);
  if (root["p2"]) s.p2 = scalar<double>(root, "p2", 0.0);
  s.graph.R = scalar<double>(root, "R_m", s.geometry.R0);
  s.graph.eps1 = scalar<double>(root, "eps1_m", s.graph.eps1);
  s.graph.eps2 = scalar<double>(root, "eps2_m", s.graph.eps2);
  s.gains.k_theta = scalar<double>(root, "k_theta_per_s2", s.gains.k_theta);
  s.gains.reference.theta = scalar<double>(root, "theta_r_rad", s.gains.reference.theta);
  s.gains.reference.rate = scalar<double>(root, "theta_r_rate_radps", 0.0);
  s.gains.reference.accel = scalar<double>(root, "theta_r_accel_radps2", 0.0);
  auto saturation = [&](const std::string& prefix, Saturation fallback) {
    Saturation out;
    out.limit = scalar<double>(root, prefix + "_L", fallback.limit);
    out.bound = scalar<double>(root, prefix + "_M", fallback.bound);
    out.knee = scalar<double>(root, prefix + "_knee", std::max(out.limit, fallback.knee));
    return out;
  };
  s.gains.sigma1 = saturation("sigma1", s.gains.sigma1);
  s.gains.sigma2 = saturation("sigma2", s.gains.sigma2);

  const auto placement = scalar<std::string>(root, "placement", "two-circles");
  if (placement == "two-circles") {
    s.placement = Placement::two_circles;
  } else if (placement == "explicit") {
    s.placement = Placement::explicit_list;
  } else {
    schema_error(fmt::format("placement must be 'two-circles' or 'explicit', got '{}'", placement));
  }
  s.placement_z = scalar<double>(root, "placement_z", s.placement_z);
  s.initial_speed.lo = scalar<double>(root, "initial_speed_min_mps", s.initial_speed.lo);
  s.initial_speed.hi = scalar<double>(root, "initial_speed_max_mps", s.initial_speed.hi);
  s.initial_heading.lo = scalar<double>(root, "initial_heading_min_rad", s.initial_heading.lo);
  s.initial_heading.hi = scalar<double>(root, "initial_heading_max_rad", s.initial_heading.hi);
  for (const auto& xy : tuple_list(root, "positions_m", 2)) s.positions.emplace_back(xy[0], xy[1]);
  s.headings = number_list(root, "headings_rad");
  s.speeds = number_list(root, "speeds_mps");
  s.angular_speeds = number_list(root, "angular_speeds_radps");
  if (s.placement == Placement::explicit_list) {
    if (!root["agents"]) s.agents = s.positions.size();
    if (s.positions.size() != s.agents || s.headings.size() != s.agents ||
        s.speeds.size() != s.agents)
      schema_error("explicit placement needs positions_m, headings_rad and speeds_mps for every agent");
    if (!s.angular_speeds.empty() && s.angular_speeds.size() != s.agents)
      schema_error("angular_speeds_radps must list every agent");
  }

  if (root["leader_index"]) {
    LeaderSpec leader;
    leader.index = scalar<std::size_t>(root, "leader_index", 0);
    leader.reference_speed = scalar<double>(root, "leader_speed_mps", leader.reference_speed);
    s.leader = leader;
  } else if (root["leader_speed_mps"]) {
    schema_error("leader_speed_mps requires leader_index");
  }
  for (const auto& o : tuple_list(root, "obstacles_m", 3))
    s.obstacles.push_back({Vec2(o[0], o[1]), o[2]});
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FlocksimError(fmt::format("cannot open scenario file '{}'", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

std::string to_text(const Scenario& s) {
  std::string out;
  auto line = [&](const std::string& key, const auto& value) {
    out += fmt::format("{}: {}\n", key, value);
  };
  auto list = [](const std::vector<double>& values) {
    return fmt::format("[{}]", fmt::join(values, ", "));
  };
  line("agents", s.agents);
  line("seed", s.seed);
  line("dt_s", s.dt);
  line("horizon_s", s.horizon);
  line("r0_m", s.geometry.r0);
  line("a_m", s.geometry.a);
  line("A_m", s.geometry.A);
  line("R0_m", s.geometry.R0);
  line("U_max", s.u_max);
  if (s.p1) line("p1", *s.p1);
  if (s.p2) line("p2", *s.p2);
  line("R_m", s.graph.R);
  line("eps1_m", s.graph.eps1);
  line("eps2_m", s.graph.eps2);
  line("k_theta_per_s2", s.gains.k_theta);
  line("theta_r_rad", s.gains.reference.theta);
  line("theta_r_rate_radps", s.gains.reference.rate);
  line("theta_r_accel_radps2", s.gains.reference.accel);
  line("sigma1_L", s.gains.sigma1.limit);
  line("sigma1_M", s.gains.sigma1.bound);
  line("sigma1_knee", s.gains.sigma1.knee);
  line("sigma2_L", s.gains.sigma2.limit);
  line("sigma2_M", s.gains.sigma2.bound);
  line("sigma2_knee", s.gains.sigma2.knee);
  if (s.placement == Placement::two_circles) {
    line("placement", "two-circles");
    line("placement_z", s.placement_z);
    line("initial_speed_min_mps", s.initial_speed.lo);
    line("initial_speed_max_mps", s.initial_speed.hi);
    line("initial_heading_min_rad", s.initial_heading.lo);
    line("initial_heading_max_rad", s.initial_heading.hi);
  } else {
    line("placement", "explicit");
    std::vector<std::string> xy;
    for (const Vec2& q : s.positions) xy.push_back(fmt::format("[{}, {}]", q.x(), q.y()));
    line("positions_m", fmt::format("[{}]", fmt::join(xy, ", ")));
    line("headings_rad", list(s.headings));
    line("speeds_mps", list(s.speeds));
    if (!s.angular_speeds.empty()) line("angular_speeds_radps", list(s.angular_speeds));
  }
  if (s.leader) {
    line("leader_index", s.leader->index);
    line("leader_speed_mps", s.leader->reference_speed);
  }
  if (!s.obstacles.empty()) {
    std::vector<std::string> obs;
    for (const Obstacle& o : s.obstacles)
      obs.push_back(fmt::format("[{}, {}, {}]", o.center.x(), o.center.y(), o.radius));
    line("obstacles_m", fmt::format("[{}]", fmt::join(obs, ", ")));
  }
  return out;
}

std::vector<AgentState> ring_placement(std::size_t agents, std::uint64_t seed,
                                        Interval speed_range, Interval heading_range, double z) {
  const std::size_t inner = (agents + 2) / 3;  // ceil(N / 3)
  std::vector<AgentState> states(agents);
  for (std::size_t k = 0; k < agents; ++k) {
    const double gamma = k < inner ? 4.0 : 8.0;
    const double angle = z * std::numbers::pi * static_cast<double>(k) / gamma + std::numbers::pi;
    states[k].q = Vec2(gamma * std::sin(angle), gamma * std::cos(angle));
  }
  std::mt19937_64 gen(seed);
  for (auto& s : states) s.theta = wrap_angle(uniform(gen, heading_range));
  for (auto& s : states) s.v = uniform(gen, speed_range);
  return states;
}

std::vector<AgentState> initial_states(const Scenario& s) {
  if (s.placement == Placement::two_circles)
    return ring_placement(s.agents, s.seed, s.initial_speed, s.initial_heading, s.placement_z);
  std::vector<AgentState> states(s.agents);
  for (std::size_t i = 0; i < s.agents; ++i) {
    states[i].q = s.positions[i];
    states[i].theta = wrap_angle(s.headings[i]);
    states[i].v = s.speeds[i];
    states[i].w = s.angular_speeds.empty() ? 0.0 : s.angular_speeds[i];
  }
  return states;
}

void validate(const Scenario& s) {
  if (s.agents < 2) invalid("at least two agents are required");
  const PotentialParams potential = s.potential();
  try {
    s.graph.validate();
    s.gains.validate();
  } catch (const std::invalid_argument& e) {
    invalid(e.what());
  }
  if (!(s.dt > 0.0) || !std::isfinite(s.dt)) invalid("dt_s must be positive");
  if (!(s.horizon >= s.dt) || !std::isfinite(s.horizon)) invalid("horizon_s must be at least dt_s");
  if (!(s.initial_speed.lo <= s.initial_speed.hi) || !(s.initial_heading.lo <= s.initial_heading.hi))
    invalid("initial ranges must satisfy min <= max");
  if (s.leader) {
    if (s.leader->index >= s.agents) invalid("leader_index outside the agent range");
    if (!std::isfinite(s.leader->reference_speed)) invalid("leader_speed_mps must be finite");
  }
  for (const Obstacle& o : s.obstacles)
    if (!(o.radius > 0.0)) invalid("obstacle radius must be positive");

  if (s.graph.R != potential.R0)
    throw ScenarioError("graph_binding", "sensing radius R must equal R0");
  if (!(potential.r0 <= s.graph.eps1 && s.graph.eps1 < potential.a))
    throw ScenarioError("graph_binding", "eps1 must satisfy r0 <= eps1 < a");
  if (!(s.graph.eps2 > 0.0 && s.graph.eps2 <= potential.R0 - potential.a))
    throw ScenarioError("graph_binding", "eps2 must satisfy 0 < eps2 <= R0 - a");

  const auto states = initial_states(s);
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (!is_finite(states[i])) invalid(fmt::format("agent {} has a non-finite initial state", i));
    for (std::size_t j = i + 1; j < states.size(); ++j)
      if (!((states[i].q - states[j].q).norm() > 0.0))
        throw ScenarioError("coincident_positions",
                            fmt::format("agents {} and {} start at the same point", i, j));
    for (const Obstacle& o : s.obstacles)
      if (!(clearance(states[i].q, o) > 0.0))
        throw ScenarioError("obstacle_overlap",
                            fmt::format("agent {} starts on or inside an obstacle", i));
  }
  std::vector<Vec2> positions;
  for (const auto& st : states) positions.push_back(st.q);
  const ProximityGraph graph = ProximityGraph::initial(positions, s.graph);
  if (!graph.is_connected())
    throw ScenarioError("disconnected_initial_graph", "initial proximity graph is not connected");
  const V1Budget budget = v1_budget(states, graph, Potential(potential), s.graph.eps2);
  if (!budget.ok)
    throw ScenarioError("v1_budget_violated",
                        fmt::format("V1 budget fails: V1(0) = {}, limit = {}, V1max = {}, U_M = {}",
                                    budget.v1_initial, budget.v1_limit, budget.v1_max,
                                    potential.u_max));
}

Scenario free_flock_scenario(std::uint64_t seed) {
  Scenario s;
  s.seed = seed;
  s.gains.reference.theta = std::numbers::pi / 2.0;
  return s;
}

Scenario obstacle_scenario(std::uint64_t seed) {
  Scenario s;
  s.seed = seed;
  s.gains.reference.theta = std::numbers::pi / 4.0;
  s.leader = LeaderSpec{0, 0.2};
  s.obstacles.push_back({Vec2(12.0, -1.0), 1.0});
  return s;
}

}  // namespace flocksim
