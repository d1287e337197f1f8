// SPDX-License-Identifier: Apache-2.0
#include "lagom/workloads.hpp"

#include <random>

namespace lagom {

namespace {

// Draw helpers with explicit arithmetic so generated workloads do not depend
// on standard-library distribution internals.
struct Draw {
  std::mt19937_64 gen;
  explicit Draw(std::uint64_t seed) : gen(seed) {}

  std::int64_t int_in(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(
                    gen() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  double real_in(double lo, double hi) {
    const double unit =
        static_cast<double>(gen() >> 11) * 0x1.0p-53;  // [0, 1)
    return lo + (hi - lo) * unit;
  }
};

// Generator ranges. Compute ops land near a couple of waves on the default
// device; messages are sized so comm and compute times are comparable once
// a few channels are allocated.
constexpr std::int64_t kBlocksLo = 64, kBlocksHi = 512;
constexpr std::int64_t kResidentLo = 1, kResidentHi = 4;
constexpr std::int64_t kBytesPerBlockLo = 500, kBytesPerBlockHi = 4000;
constexpr double kWaveTimeLo = 20.0, kWaveTimeHi = 80.0;
constexpr std::int64_t kMessageLo = 256 * kKiB, kMessageHi = 8192 * kKiB;

ComputeOp draw_compute(Draw& d, std::string id) {
  ComputeOp op;
  op.id = std::move(id);
  op.total_blocks = d.int_in(kBlocksLo, kBlocksHi);
  op.blocks_per_sm = d.int_in(kResidentLo, kResidentHi);
  op.bytes_per_block = d.int_in(kBytesPerBlockLo, kBytesPerBlockHi);
  op.base_wave_time = d.real_in(kWaveTimeLo, kWaveTimeHi);
  return op;
}

CommOp draw_comm(Draw& d, std::string id, Collective collective) {
  CommOp op;
  op.id = std::move(id);
  op.collective = collective;
  op.message_bytes = d.int_in(kMessageLo / kKiB, kMessageHi / kKiB) * kKiB;
  return op;
}

}  // namespace

GpuSpec default_gpu() { return GpuSpec{}; }

Workload gen_fsdp(int layers, std::uint64_t seed) {
  Draw d(seed);
  Workload w;
  w.gpu = default_gpu();
  for (int l = 0; l < layers; ++l) {
    const std::string ls = std::to_string(l);
    CommOp ag = draw_comm(d, "ag" + ls, Collective::AllGather);
    if (l > 0) ag.ready_after = "mm" + std::to_string(l - 1);
    w.comm_ops.push_back(std::move(ag));

    w.compute_ops.push_back(draw_compute(d, "mm" + ls));

    CommOp rs = draw_comm(d, "rs" + ls, Collective::ReduceScatter);
    rs.ready_after = "mm" + ls;
    w.comm_ops.push_back(std::move(rs));
  }
  return w;
}

Workload gen_tp_domino(int layers, std::uint64_t seed) {
  Draw d(seed);
  Workload w;
  w.gpu = default_gpu();
  for (int l = 0; l < layers; ++l) {
    const std::string ls = std::to_string(l);
    w.compute_ops.push_back(draw_compute(d, "mm" + ls));
    CommOp ar = draw_comm(d, "ar" + ls, Collective::AllReduce);
    ar.ready_after = "mm" + ls;
    w.comm_ops.push_back(std::move(ar));
  }
  return w;
}

Workload gen_ep_dualbatch(int layers, std::uint64_t seed) {
  Draw d(seed);
  Workload w;
  w.gpu = default_gpu();
  for (int l = 0; l < layers; ++l) {
    const std::string ls = std::to_string(l);
    CommOp dispatch = draw_comm(d, "a2a_in" + ls, Collective::AllToAll);
    if (l > 0) dispatch.ready_after = "ex" + std::to_string(l - 1);
    w.comm_ops.push_back(std::move(dispatch));

    w.compute_ops.push_back(draw_compute(d, "ex" + ls));

    CommOp combine = draw_comm(d, "a2a_out" + ls, Collective::AllToAll);
    combine.ready_after = "ex" + ls;
    w.comm_ops.push_back(std::move(combine));
  }
  return w;
}

Workload gen_allreduce_pair() {
  Workload w;
  w.gpu = default_gpu();
  for (int i = 0; i < 7; ++i) {
    ComputeOp op;
    op.id = "mm" + std::to_string(i);
    op.total_blocks = 256;
    op.blocks_per_sm = 2;
    op.bytes_per_block = 2000;
    op.base_wave_time = 50.0;
    w.compute_ops.push_back(std::move(op));
  }
  CommOp a;
  a.id = "ar_a";
  a.collective = Collective::AllReduce;
  a.message_bytes = 2048 * kKiB;
  w.comm_ops.push_back(std::move(a));

  CommOp b;
  b.id = "ar_b";
  b.collective = Collective::AllReduce;
  b.message_bytes = 32768 * kKiB;
  w.comm_ops.push_back(std::move(b));
  return w;
}

Workload gen_random(int num_compute, int num_comm, std::uint64_t seed) {
  Draw d(seed);
  Workload w;
  w.gpu = default_gpu();
  for (int i = 0; i < num_compute; ++i)
    w.compute_ops.push_back(draw_compute(d, "c" + std::to_string(i)));
  static constexpr Collective kCollectives[] = {
      Collective::AllReduce, Collective::AllGather, Collective::ReduceScatter,
      Collective::AllToAll};
  for (int j = 0; j < num_comm; ++j) {
    CommOp op = draw_comm(d, "k" + std::to_string(j),
                          kCollectives[d.int_in(0, 3)]);
    if (num_compute > 0 && d.int_in(0, 2) == 0)
      op.ready_after = "c" + std::to_string(d.int_in(0, num_compute - 1));
    w.comm_ops.push_back(std::move(op));
  }
  return w;
}

}  // namespace lagom
