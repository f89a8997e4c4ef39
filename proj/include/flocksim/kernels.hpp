#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "flocksim/control.hpp"
#include "flocksim/dynamics.hpp"
#include "flocksim/obstacles.hpp"
#include "flocksim/potential.hpp"
#include "flocksim/proximity_graph.hpp"

namespace flocksim {

struct LeaderSpec {
  std::size_t index = 0;
  double reference_speed = 0.2;
};

/// Read-only snapshot the control laws are evaluated against. Every agent sees
/// the same snapshot; results are independent of evaluation order.
struct ControlContext {
  std::span<const AgentState> states;
  const ProximityGraph* graph = nullptr;
  const PotentialParams* potential = nullptr;
  const ControlGains* gains = nullptr;
  std::optional<LeaderSpec> leader;
  /// Per-agent virtual agents; an empty entry means obstacle mode is off. May be
  /// empty altogether for obstacle-free runs.
  std::span<const std::vector<VirtualAgent>> virtuals;
};

/// Mode selection for one agent:
///   obstacle mode: flock speed law + virtual-agent terms, heading law toward the obstacle reference;
///   leader (not avoiding): cruise law, flock heading law;
///   otherwise: flock speed and heading laws.
ControlInput agent_control(std::size_t i, const ControlContext& ctx);

enum class Execution { serial, parallel };

/// Serial reference: one agent after another.
void compute_controls_serial(const ControlContext& ctx, std::span<ControlInput> out);
/// OpenMP over agents. `threads` <= 0 uses the OpenMP default.
void compute_controls_parallel(const ControlContext& ctx, std::span<ControlInput> out,
                               int threads = 0);

void integrate_serial(std::span<const AgentState> in, std::span<const ControlInput> controls,
                      double dt, std::span<AgentState> out);
void integrate_parallel(std::span<const AgentState> in, std::span<const ControlInput> controls,
                        double dt, std::span<AgentState> out, int threads = 0);

inline void compute_controls(const ControlContext& ctx, std::span<ControlInput> out,
                             Execution ex, int threads = 0) {
  if (ex == Execution::serial) compute_controls_serial(ctx, out);
  else compute_controls_parallel(ctx, out, threads);
}

inline void integrate(std::span<const AgentState> in, std::span<const ControlInput> controls,
                      double dt, std::span<AgentState> out, Execution ex, int threads = 0) {
  if (ex == Execution::serial) integrate_serial(in, controls, dt, out);
  else integrate_parallel(in, controls, dt, out, threads);
}

}  // namespace flocksim
