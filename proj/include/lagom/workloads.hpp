// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "lagom/model.hpp"

namespace lagom {

/// The fixed device every generator targets: 64 SMs, 600 bytes/us peak
/// memory bandwidth, 400 bytes/us link, phi = 0.6, delta = 0.
GpuSpec default_gpu();

/// Fully-sharded layout: per layer an AllGather (ready after the previous
/// layer's compute), one compute op, and a ReduceScatter (ready after this
/// layer's compute). M = layers, N = 2*layers.
Workload gen_fsdp(int layers, std::uint64_t seed);

/// Tensor-parallel pipelining: one compute op per layer followed by an
/// AllReduce gated on it, so each AllReduce overlaps the next layer.
/// M = layers, N = layers.
Workload gen_tp_domino(int layers, std::uint64_t seed);

/// Expert-parallel dual-batch shape: per layer a dispatch AlltoAll (ready
/// after the previous layer's compute), the expert compute, and a combine
/// AlltoAll gated on it. M = layers, N = 2*layers.
Workload gen_ep_dualbatch(int layers, std::uint64_t seed);

/// Two AllReduce ops racing seven identical matmul-shaped compute ops from
/// t=0. Comm "ar_b" carries a 16x larger message than "ar_a", so its tuning
/// gain dominates. Fixed, no randomness.
Workload gen_allreduce_pair();

/// Seeded random instance with M compute ops and N comm ops drawn from the
/// documented ranges (see workloads.cpp). Roughly a third of the comms gain
/// a ready_after dependency when compute ops exist.
Workload gen_random(int num_compute, int num_comm, std::uint64_t seed);

}  // namespace lagom
