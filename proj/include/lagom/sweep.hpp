// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lagom/commperf.hpp"
#include "lagom/model.hpp"

namespace lagom {

enum class SweepParam { NumChannels, ChunkSize, NumThreads };

SweepParam sweep_param_from_string(const std::string& s);  // "nc"|"c"|"nt"

struct SweepRow {
  std::int64_t value = 0;
  double comm_time = 0.0;      // realized x of the swept comm
  double total_compute = 0.0;  // Y
  double makespan = 0.0;       // Z
};

/// Re-simulates the workload once per value, overriding one parameter of the
/// named comm while every other config stays at its base.
std::vector<SweepRow> run_sweep(const Workload& workload,
                                const std::vector<CommConfig>& base_configs,
                                const SubspaceParams& params,
                                const std::string& comm_id, SweepParam param,
                                const std::vector<std::int64_t>& values);

/// "value,x_comm,Y,Z" rows; header only when no values were swept.
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace lagom
