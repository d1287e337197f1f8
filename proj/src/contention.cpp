// SPDX-License-Identifier: Apache-2.0
#include "lagom/contention.hpp"

#include <string>

#include "lagom/error.hpp"

namespace lagom {

namespace {

int occupied_channels(const std::optional<ActiveComm>& active) {
  return active ? active->num_channels : 0;
}

double footprint(const std::optional<ActiveComm>& active) {
  return active ? active->footprint : 0.0;
}

}  // namespace

std::int64_t wave_count(const ComputeOp& op,
                        const std::optional<ActiveComm>& active,
                        const GpuSpec& gpu) {
  const int nc = occupied_channels(active);
  if (nc >= gpu.num_sms)
    throw Error(ErrorCode::SmExhaustion, op.id,
                "communication occupies all " + std::to_string(gpu.num_sms) +
                    " SMs");
  const std::int64_t per_wave =
      static_cast<std::int64_t>(gpu.num_sms - nc) * op.blocks_per_sm;
  return (op.total_blocks + per_wave - 1) / per_wave;
}

double wave_time(const ComputeOp& op, std::int64_t blocks_in_wave,
                 const std::optional<ActiveComm>& active, const GpuSpec& gpu) {
  const double available = gpu.peak_mem_bw - footprint(active);
  if (!(available > 0))
    throw Error(ErrorCode::BandwidthExhaustion, op.id,
                "communication footprint consumes the full memory bandwidth");
  return op.base_wave_time +
         static_cast<double>(blocks_in_wave) *
             static_cast<double>(op.bytes_per_block) / available;
}

double comp_time_static(const ComputeOp& op, const GpuSpec& gpu,
                        std::span<const WaveShare> assignment) {
  if (assignment.empty()) return 0.0;

  double total = 0.0;
  std::int64_t consumed = 0;
  std::int64_t last_wave_capacity = 0;
  for (const WaveShare& share : assignment) {
    const int nc = occupied_channels(share.active);
    if (nc >= gpu.num_sms)
      throw Error(ErrorCode::SmExhaustion, op.id, "no SMs left for computation");
    const std::int64_t per_wave =
        static_cast<std::int64_t>(gpu.num_sms - nc) * op.blocks_per_sm;
    total += static_cast<double>(share.waves) *
             wave_time(op, per_wave, share.active, gpu);
    consumed += share.waves * per_wave;
    if (share.waves > 0) last_wave_capacity = per_wave;
  }

  // The shares must cover the op exactly: full up to the final wave, which
  // may run partially filled.
  if (consumed < op.total_blocks || consumed - last_wave_capacity >= op.total_blocks)
    throw Error(ErrorCode::PartitionMismatch, op.id,
                "wave shares cover " + std::to_string(consumed) +
                    " blocks for an op of " + std::to_string(op.total_blocks));
  return total;
}

}  // namespace lagom
