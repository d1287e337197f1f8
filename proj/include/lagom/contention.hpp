// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>

#include "lagom/model.hpp"

namespace lagom {

/// The communication in flight while a compute wave runs.
struct ActiveComm {
  int num_channels = 0;   // SMs occupied by the comm
  double footprint = 0.0; // V, bytes/us of global bandwidth consumed

  bool operator==(const ActiveComm&) const = default;
};

/// Waves needed to drain an op: ceil(mu / ((lambda - NC) * TB)).
/// Throws Error(ErrorCode::SmExhaustion) when NC >= lambda.
std::int64_t wave_count(const ComputeOp& op,
                        const std::optional<ActiveComm>& active,
                        const GpuSpec& gpu);

/// Duration of one wave: theta + blocks * D / (peak_bw - V).
/// Throws Error(ErrorCode::BandwidthExhaustion) when peak_bw - V <= 0.
double wave_time(const ComputeOp& op, std::int64_t blocks_in_wave,
                 const std::optional<ActiveComm>& active, const GpuSpec& gpu);

/// One segment of an op's wave schedule under a fixed contention state.
struct WaveShare {
  std::optional<ActiveComm> active;
  std::int64_t waves = 0;
};

/// Analytic computation time: sum of full-wave latency times wave count per
/// segment. The shares must consume exactly the op's blocks: the cumulative
/// full-wave capacity first reaches total_blocks on the final wave.
/// Empty assignment returns 0. Throws Error(ErrorCode::PartitionMismatch).
double comp_time_static(const ComputeOp& op, const GpuSpec& gpu,
                        std::span<const WaveShare> assignment);

}  // namespace lagom
