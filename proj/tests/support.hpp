// SPDX-License-Identifier: Apache-2.0
//
// Shared fixtures and independent oracles used by the unit and acceptance
// suites.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "lagom/commperf.hpp"
#include "lagom/model.hpp"
#include "lagom/simulator.hpp"
#include "lagom/tuner.hpp"
#include "lagom/workloads.hpp"

namespace lagom_test {

using namespace lagom;

inline SubspaceKey ring_simple_p2p() {
  return SubspaceKey{Algorithm::Ring, Protocol::Simple, Transport::P2p};
}

/// Single-subspace parameter table for hand-computed cases.
inline SubspaceParams single_subspace(const SubspaceCoeffs& coeffs) {
  SubspaceParams params;
  params.set(ring_simple_p2p(), coeffs);
  return params;
}

/// Defaults with every subspace's bandwidth footprint zeroed.
inline SubspaceParams no_contention_params() {
  SubspaceParams params = SubspaceParams::defaults();
  for (const SubspaceKey& key : params.keys()) {
    SubspaceCoeffs c = params.at(key);
    c.mem_coeff = 0.0;
    params.set(key, c);
  }
  return params;
}

inline CommConfig make_config(const SubspaceKey& key, int nc, int nt,
                              std::int64_t chunk) {
  CommConfig cfg;
  cfg.algorithm = key.algorithm;
  cfg.protocol = key.protocol;
  cfg.transport = key.transport;
  cfg.num_channels = nc;
  cfg.num_threads = nt;
  cfg.chunk_size = chunk;
  return cfg;
}

/// One big AllReduce racing one FFN-shaped compute op: the comm outlasts the
/// computation at every config on the default device, so contention-shape
/// sweeps are clean.
inline Workload micro_overlap_workload() {
  Workload w;
  w.gpu = default_gpu();
  ComputeOp ffn;
  ffn.id = "ffn";
  ffn.total_blocks = 512;
  ffn.blocks_per_sm = 2;
  ffn.bytes_per_block = 2500;
  ffn.base_wave_time = 60.0;
  w.compute_ops.push_back(ffn);
  CommOp ar;
  ar.id = "ar";
  ar.collective = Collective::AllReduce;
  ar.message_bytes = 32768 * kKiB;
  w.comm_ops.push_back(ar);
  return w;
}

/// N copies of one compute+comm unit; comm-bound at every visited config so
/// every comm's tuning trajectory has the same length regardless of N.
inline Workload replicated_workload(int copies) {
  Workload w;
  w.gpu = default_gpu();
  for (int i = 0; i < copies; ++i) {
    ComputeOp op;
    op.id = "c" + std::to_string(i);
    op.total_blocks = 256;
    op.blocks_per_sm = 2;
    op.bytes_per_block = 2000;
    op.base_wave_time = 50.0;
    w.compute_ops.push_back(op);
    CommOp comm;
    comm.id = "k" + std::to_string(i);
    comm.collective = Collective::AllGather;
    comm.message_bytes = 256 * kKiB;
    w.comm_ops.push_back(comm);
  }
  return w;
}

/// Single-subspace table with a dominant base latency, so per-step relative
/// gains shrink gradually and a comm walks ~16 resource steps before its
/// standalone optimum, like a real channel-count ramp.
inline SubspaceParams replicated_params() {
  SubspaceCoeffs c;
  c.base_latency = 3000.0;
  c.per_channel_bw = 25.0;
  c.per_chunk_overhead = 2.0;
  c.per_channel_setup = 0.5;
  c.mem_coeff = 0.5;
  c.chunk_knee = 128 * kKiB;
  c.nt_floor = 0.85;
  return single_subspace(c);
}

/// Independent wave-by-wave walk used as the simulator's oracle. Takes the
/// comm intervals as given (start, end, occupancy, footprint); computes
/// compute-op times with explicit loops.
struct StaticComm {
  double start = 0.0;
  double end = 0.0;
  int occupancy = 0;
  double footprint = 0.0;
};

inline std::vector<double> naive_wave_walk(const Workload& w,
                                           const std::vector<StaticComm>& comms) {
  std::vector<double> times;
  double t = 0.0;
  for (const ComputeOp& op : w.compute_ops) {
    const double begin = t;
    std::int64_t remaining = op.total_blocks;
    while (remaining > 0) {
      int nc = 0;
      double v = 0.0;
      for (const StaticComm& c : comms) {
        if (c.start <= t && t < c.end) {
          nc = c.occupancy;
          v = c.footprint;
        }
      }
      const std::int64_t capacity =
          static_cast<std::int64_t>(w.gpu.num_sms - nc) * op.blocks_per_sm;
      const std::int64_t blocks = std::min(remaining, capacity);
      t += op.base_wave_time + static_cast<double>(blocks) *
                                   static_cast<double>(op.bytes_per_block) /
                                   (w.gpu.peak_mem_bw - v);
      remaining -= blocks;
    }
    times.push_back(t - begin);
  }
  return times;
}

inline bool approx_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace lagom_test
