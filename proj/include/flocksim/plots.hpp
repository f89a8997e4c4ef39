#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "flocksim/trace.hpp"

namespace flocksim {

inline constexpr double kConvergenceThreshold = 1e-2;

/// Convergence summary of a trace. A time is the first row time from which the
/// quantity stays below the threshold until the end of the trace.
struct PlotSummary {
  std::optional<double> heading_spread_time;
  std::optional<double> heading_error_time;
  std::optional<double> speed_spread_time;
  std::optional<double> angular_speed_time;
  double d_min = 0.0;
  double u_max_abs = 0.0;
  double tau_max_abs = 0.0;
};

/// First time from which `series` stays below `threshold` (nullopt if never).
std::optional<double> settle_time(const std::vector<double>& t, const std::vector<double>& series,
                                  double threshold);

PlotSummary summarize(const Trace& trace, double threshold = kConvergenceThreshold);

/// File names written by emit_plots, in order; the summary comes last.
std::vector<std::string> plot_file_names();

/// Writes one whitespace-delimited series file per figure plus summary.json into
/// `outdir` (created if missing). Throws FlocksimError on an empty trace before
/// touching the filesystem, and on I/O failure (removing what it wrote).
std::vector<std::filesystem::path> emit_plots(const Trace& trace,
                                              const std::filesystem::path& outdir);

}  // namespace flocksim
