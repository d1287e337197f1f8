// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "lagom/commperf.hpp"
#include "lagom/model.hpp"

namespace lagom {

struct SimOptions {
  /// When false, running comms are treated as occupying zero SMs.
  /// Diagnostic knob used by the no-contention identity checks.
  bool sm_occupancy = true;
};

/// Event-driven co-simulation of the compute and comm streams.
///
/// Scheduling contract:
///  - compute ops run back-to-back from t=0, wave by wave;
///  - comm j starts at max(end of comm j-1, completion of its ready_after op);
///  - a wave samples the comm whose interval contains the wave's start
///    instant; a comm starting exactly then is visible (comm-first tie-break);
///  - with delta > 0 a comm progresses at rate 1/(1+delta) while a compute
///    wave is in flight, which realizes the (1 + delta*u) stretch piecewise.
SimResult simulate(const Workload& workload,
                   const std::vector<CommConfig>& configs,
                   const SubspaceParams& params, const SimOptions& options = {});

/// Projection of simulate used by the tuning loop.
struct ProfileResult {
  std::vector<double> comm_times;  // x_j
  double total_comm = 0.0;         // X
  double total_compute = 0.0;      // Y
  double makespan = 0.0;           // Z

  bool operator==(const ProfileResult&) const = default;
};

ProfileResult profile(const Workload& workload,
                      const std::vector<CommConfig>& configs,
                      const SubspaceParams& params,
                      const SimOptions& options = {});

}  // namespace lagom
