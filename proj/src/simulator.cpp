// SPDX-License-Identifier: Apache-2.0
#include "lagom/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "lagom/contention.hpp"
#include "lagom/error.hpp"

namespace lagom {

namespace {

struct CommRuntime {
  double base_duration = 0.0;  // comm_time under the assigned config
  double footprint = 0.0;      // V while running
  int occupancy = 0;           // SMs held while running
  int dep_index = -1;          // compute op gating the start, -1 for none
  bool started = false;
  bool finished = false;
  double start = 0.0;
  double end = 0.0;
  double work_left = 0.0;      // remaining base duration
};

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

SimResult simulate(const Workload& workload,
                   const std::vector<CommConfig>& configs,
                   const SubspaceParams& params, const SimOptions& options) {
  validate(workload);
  const std::size_t n_comm = workload.comm_ops.size();
  const std::size_t n_comp = workload.compute_ops.size();
  if (configs.size() != n_comm)
    throw Error(ErrorCode::InvalidWorkload, "configs",
                "expected " + std::to_string(n_comm) + " configs, got " +
                    std::to_string(configs.size()));

  const GpuSpec& gpu = workload.gpu;
  const double delta = gpu.compute_on_comm_slowdown;
  const double busy_rate = 1.0 / (1.0 + delta);

  std::unordered_map<std::string, int> compute_index;
  for (std::size_t i = 0; i < n_comp; ++i)
    compute_index.emplace(workload.compute_ops[i].id, static_cast<int>(i));

  std::vector<CommRuntime> comm(n_comm);
  for (std::size_t j = 0; j < n_comm; ++j) {
    const CommOp& op = workload.comm_ops[j];
    validate_config(configs[j], op, gpu, "configs[" + std::to_string(j) + "]");
    comm[j].base_duration = comm_time(op, configs[j], gpu, params);
    comm[j].footprint = mem_footprint(configs[j], gpu, params);
    comm[j].occupancy = options.sm_occupancy ? configs[j].num_channels : 0;
    comm[j].work_left = comm[j].base_duration;
    if (op.ready_after) comm[j].dep_index = compute_index.at(*op.ready_after);
  }

  std::vector<double> comp_done(n_comp, kInf);
  std::size_t next_start = 0;
  std::optional<std::size_t> active;

  // Starts every comm whose chain predecessor has finished and whose gating
  // compute op has completed by `now`. Start instants always coincide with
  // the event point that made them startable.
  auto try_start = [&](double now) {
    while (!active && next_start < n_comm) {
      CommRuntime& c = comm[next_start];
      const double prev_end =
          next_start == 0 ? 0.0
                          : (comm[next_start - 1].finished ? comm[next_start - 1].end
                                                           : kInf);
      const double ready = c.dep_index < 0 ? 0.0 : comp_done[c.dep_index];
      const double s = std::max(prev_end, ready);
      if (s > now) break;
      c.started = true;
      c.start = s;
      active = next_start;
      ++next_start;
    }
  };

  // Advances comm progress across [from, to] at the given rate, chaining
  // completions and starts inside the span.
  auto advance = [&](double from, double to, double rate) {
    double t = from;
    try_start(t);
    while (active && t < to) {
      CommRuntime& c = comm[*active];
      const double finish_in = c.work_left / rate;
      if (t + finish_in <= to) {
        t += finish_in;
        c.work_left = 0.0;
        c.finished = true;
        c.end = t;
        active.reset();
        try_start(t);
      } else {
        c.work_left -= (to - t) * rate;
        t = to;
      }
    }
  };

  SimResult result;
  result.comp_times.resize(n_comp, 0.0);
  result.comm_times.resize(n_comm, 0.0);

  double t = 0.0;
  for (std::size_t i = 0; i < n_comp; ++i) {
    const ComputeOp& op = workload.compute_ops[i];
    const double op_begin = t;
    std::int64_t remaining = op.total_blocks;
    while (remaining > 0) {
      try_start(t);  // a comm starting exactly now is visible to this wave
      std::optional<ActiveComm> ac;
      if (active)
        ac = ActiveComm{comm[*active].occupancy, comm[*active].footprint};
      const int nc = ac ? ac->num_channels : 0;
      if (nc >= gpu.num_sms)
        throw Error(ErrorCode::SmExhaustion, op.id,
                    "communication occupies all SMs");
      const std::int64_t capacity =
          static_cast<std::int64_t>(gpu.num_sms - nc) * op.blocks_per_sm;
      const std::int64_t blocks = std::min(remaining, capacity);
      const double f = wave_time(op, blocks, ac, gpu);
      result.timeline.push_back({"compute", op.id, t, f, blocks});
      advance(t, t + f, busy_rate);
      t += f;
      remaining -= blocks;
    }
    comp_done[i] = t;
    result.comp_times[i] = t - op_begin;
  }
  const double compute_end = t;

  // Drain the comm stream; no compute wave is in flight past compute_end.
  double ft = compute_end;
  while (true) {
    try_start(ft);
    if (!active) break;
    CommRuntime& c = comm[*active];
    ft += c.work_left;
    c.work_left = 0.0;
    c.finished = true;
    c.end = ft;
    active.reset();
  }

  double last_comm_end = 0.0;
  for (std::size_t j = 0; j < n_comm; ++j) {
    result.comm_times[j] = comm[j].end - comm[j].start;
    result.timeline.push_back(
        {"comm", workload.comm_ops[j].id, comm[j].start, result.comm_times[j], 0});
    last_comm_end = std::max(last_comm_end, comm[j].end);
  }

  for (double y : result.comp_times) result.total_compute += y;
  for (double x : result.comm_times) result.total_comm += x;
  result.makespan = std::max({compute_end, last_comm_end, result.total_compute,
                              result.total_comm});
  return result;
}

ProfileResult profile(const Workload& workload,
                      const std::vector<CommConfig>& configs,
                      const SubspaceParams& params, const SimOptions& options) {
  SimResult sim = simulate(workload, configs, params, options);
  return ProfileResult{std::move(sim.comm_times), sim.total_comm,
                       sim.total_compute, sim.makespan};
}

}  // namespace lagom
