// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lagom {

inline constexpr std::int64_t kKiB = 1024;

/// The modeled device. Times are microseconds, sizes bytes, bandwidths
/// bytes per microsecond throughout the project.
struct GpuSpec {
  int num_sms = 64;                       // SM count, lambda
  double peak_mem_bw = 600.0;             // peak global memory bandwidth
  double link_bw = 400.0;                 // aggregate interconnect ceiling
  double comm_bw_cap_fraction = 0.6;      // phi, fraction of peak_mem_bw a comm may consume
  double compute_on_comm_slowdown = 0.0;  // delta, reverse-interference factor

  bool operator==(const GpuSpec&) const = default;
};

/// One computation operator, reduced to its four cost parameters.
struct ComputeOp {
  std::string id;
  std::int64_t total_blocks = 1;    // mu, thread blocks to execute
  std::int64_t blocks_per_sm = 1;   // TB, resident blocks per SM
  std::int64_t bytes_per_block = 0; // D, data moved per block
  double base_wave_time = 0.0;      // theta, per-wave base compute time

  bool operator==(const ComputeOp&) const = default;
};

enum class Algorithm { Ring, Tree };
enum class Protocol { Simple, Ll, Ll128 };
enum class Transport { P2p, Shm, Net };
enum class Collective { AllReduce, AllGather, ReduceScatter, AllToAll };

const char* to_string(Algorithm a);
const char* to_string(Protocol p);
const char* to_string(Transport t);
const char* to_string(Collective c);
Algorithm algorithm_from_string(const std::string& s);
Protocol protocol_from_string(const std::string& s);
Transport transport_from_string(const std::string& s);
Collective collective_from_string(const std::string& s);

/// Thread counts a channel may use.
inline constexpr std::array<int, 10> kThreadLadder{64,  128, 192, 256, 320,
                                                   384, 448, 512, 576, 640};

bool in_thread_ladder(int num_threads);

/// One communication's tunable tuple.
struct CommConfig {
  Algorithm algorithm = Algorithm::Ring;
  Protocol protocol = Protocol::Simple;
  Transport transport = Transport::P2p;
  int num_channels = 1;               // NC
  int num_threads = 64;               // NT, member of kThreadLadder
  std::int64_t chunk_size = 32 * kKiB;  // C, multiple of 1 KiB

  bool operator==(const CommConfig&) const = default;
};

/// Per-op overrides for the resource search range.
struct CommBounds {
  int nc_max = 32;
  std::int64_t c_min = 32 * kKiB;
  std::int64_t c_max = 4096 * kKiB;

  bool operator==(const CommBounds&) const = default;
};

struct CommOp {
  std::string id;
  Collective collective = Collective::AllReduce;
  std::int64_t message_bytes = 1;  // m
  std::optional<std::string> ready_after;  // compute op id gating the start
  CommBounds bounds;

  bool operator==(const CommOp&) const = default;
};

/// One overlap group: an ordered compute stream and an ordered comm stream.
/// Both streams execute strictly in list order.
struct Workload {
  GpuSpec gpu;
  std::vector<ComputeOp> compute_ops;
  std::vector<CommOp> comm_ops;

  bool operator==(const Workload&) const = default;
};

struct TimelineEvent {
  std::string stream;  // "compute" or "comm"
  std::string op_id;
  double start = 0.0;
  double duration = 0.0;
  std::int64_t blocks = 0;  // thread blocks in this wave, 0 for comm events

  bool operator==(const TimelineEvent&) const = default;
};

struct SimResult {
  std::vector<double> comp_times;  // y_i per compute op
  std::vector<double> comm_times;  // x_j per comm op
  double total_compute = 0.0;      // Y
  double total_comm = 0.0;         // X
  double makespan = 0.0;           // Z
  std::vector<TimelineEvent> timeline;

  bool operator==(const SimResult&) const = default;
};

/// Checks every type invariant; returns its argument unchanged on success.
/// Throws Error(ErrorCode::InvalidWorkload) naming the first offending field.
const Workload& validate(const Workload& workload);

/// Effective channel ceiling for one comm: min(bounds.nc_max, num_sms - 1).
int max_channels(const CommOp& op, const GpuSpec& gpu);

/// Validates a config against one comm op's bounds and the device.
void validate_config(const CommConfig& cfg, const CommOp& op, const GpuSpec& gpu,
                     const std::string& field_prefix = "config");

}  // namespace lagom
