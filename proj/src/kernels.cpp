#include "flocksim/kernels.hpp"

#include <exception>
#include <stdexcept>
#include <string>

#include <omp.h>

#include "flocksim/errors.hpp"

namespace flocksim {

namespace {

void check_sizes(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw std::invalid_argument(what);
}

int resolve_threads(int threads) { return threads > 0 ? threads : omp_get_max_threads(); }

}  // namespace

ControlInput agent_control(std::size_t i, const ControlContext& ctx) {
  const bool avoiding = !ctx.virtuals.empty() && !ctx.virtuals[i].empty();
  const ControlGains& gains = *ctx.gains;
  ControlInput c;
  if (avoiding) {
    const auto& virtuals = ctx.virtuals[i];
    c.u = speed_control(i, ctx.states, *ctx.graph, *ctx.potential, gains.sigma1) +
          obstacle_speed_control(i, ctx.states, virtuals, *ctx.potential, gains.sigma1);
    c.tau = obstacle_heading_control(i, ctx.states, *ctx.graph, virtuals, gains);
    return c;
  }
  if (ctx.leader && ctx.leader->index == i) {
    c.u = leader_speed_control(ctx.states[i].v, ctx.leader->reference_speed, gains.sigma1);
  } else {
    c.u = speed_control(i, ctx.states, *ctx.graph, *ctx.potential, gains.sigma1);
  }
  c.tau = orientation_control(i, ctx.states, *ctx.graph, gains, gains.reference);
  return c;
}

void compute_controls_serial(const ControlContext& ctx, std::span<ControlInput> out) {
  check_sizes(ctx.states.size(), out.size(), "compute_controls: output size mismatch");
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = agent_control(i, ctx);
}

void compute_controls_parallel(const ControlContext& ctx, std::span<ControlInput> out,
                               int threads) {
  check_sizes(ctx.states.size(), out.size(), "compute_controls: output size mismatch");
  const auto n = static_cast<std::ptrdiff_t>(out.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(static) num_threads(resolve_threads(threads))
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[i] = agent_control(static_cast<std::size_t>(i), ctx);
    } catch (...) {
#pragma omp critical(flocksim_control_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

void integrate_serial(std::span<const AgentState> in, std::span<const ControlInput> controls,
                      double dt, std::span<AgentState> out) {
  check_sizes(in.size(), controls.size(), "integrate: states and controls differ in length");
  check_sizes(in.size(), out.size(), "integrate: output size mismatch");
  if (!(dt > 0.0)) throw std::invalid_argument("integrate: dt must be positive");
  for (std::size_t i = 0; i < in.size(); ++i) {
    out[i] = rk4_step(in[i], controls[i], dt);
    if (!is_finite(out[i]))
      throw NonFiniteStateError(i, "non-finite state for agent " + std::to_string(i));
  }
}

void integrate_parallel(std::span<const AgentState> in, std::span<const ControlInput> controls,
                        double dt, std::span<AgentState> out, int threads) {
  check_sizes(in.size(), controls.size(), "integrate: states and controls differ in length");
  check_sizes(in.size(), out.size(), "integrate: output size mismatch");
  if (!(dt > 0.0)) throw std::invalid_argument("integrate: dt must be positive");
  const auto n = static_cast<std::ptrdiff_t>(in.size());
#pragma omp parallel for schedule(static) num_threads(resolve_threads(threads))
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = rk4_step(in[i], controls[i], dt);
  for (std::size_t i = 0; i < out.size(); ++i)
    if (!is_finite(out[i]))
      throw NonFiniteStateError(i, "non-finite state for agent " + std::to_string(i));
}

}  // namespace flocksim
