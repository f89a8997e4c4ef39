#pragma once

#include "flocksim/kernels.hpp"
#include "flocksim/scenario.hpp"
#include "flocksim/trace.hpp"

namespace flocksim {

struct RunOptions {
  Execution execution = Execution::parallel;
  int threads = 0;  ///< <= 0: OpenMP default
};

/// Validates the scenario (throws ScenarioError) and runs it to the horizon.
/// Per step: update links, update obstacle engagement, evaluate all controls on
/// the same snapshot, monitor, integrate. Failures after validation (non-finite
/// state, contact) end the run early with Trace::error set and the rows so far kept.
Trace run(const Scenario& scenario, const RunOptions& options = {});

}  // namespace flocksim
