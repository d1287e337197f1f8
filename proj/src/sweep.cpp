// SPDX-License-Identifier: Apache-2.0
#include "lagom/sweep.hpp"

#include <sstream>

#include "lagom/error.hpp"
#include "lagom/simulator.hpp"

namespace lagom {

SweepParam sweep_param_from_string(const std::string& s) {
  if (s == "nc") return SweepParam::NumChannels;
  if (s == "c") return SweepParam::ChunkSize;
  if (s == "nt") return SweepParam::NumThreads;
  throw Error(ErrorCode::InvalidInput, "param",
              "expected one of nc|c|nt, got '" + s + "'");
}

std::vector<SweepRow> run_sweep(const Workload& workload,
                                const std::vector<CommConfig>& base_configs,
                                const SubspaceParams& params,
                                const std::string& comm_id, SweepParam param,
                                const std::vector<std::int64_t>& values) {
  std::size_t target = workload.comm_ops.size();
  for (std::size_t j = 0; j < workload.comm_ops.size(); ++j)
    if (workload.comm_ops[j].id == comm_id) target = j;
  if (target == workload.comm_ops.size())
    throw Error(ErrorCode::InvalidWorkload, "comm",
                "no comm op with id '" + comm_id + "'");

  std::vector<SweepRow> rows;
  rows.reserve(values.size());
  std::vector<CommConfig> configs = base_configs;
  for (std::int64_t value : values) {
    configs[target] = base_configs[target];
    switch (param) {
      case SweepParam::NumChannels:
        configs[target].num_channels = static_cast<int>(value);
        break;
      case SweepParam::ChunkSize:
        configs[target].chunk_size = value;
        break;
      case SweepParam::NumThreads:
        configs[target].num_threads = static_cast<int>(value);
        break;
    }
    const SimResult r = simulate(workload, configs, params);
    rows.push_back({value, r.comm_times[target], r.total_compute, r.makespan});
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "value,x_comm,Y,Z\n";
  out.precision(17);
  for (const SweepRow& row : rows)
    out << row.value << ',' << row.comm_time << ',' << row.total_compute << ','
        << row.makespan << '\n';
  return out.str();
}

}  // namespace lagom
