// SPDX-License-Identifier: Apache-2.0
#include "lagom/model.hpp"

#include <algorithm>
#include <unordered_set>

#include "lagom/error.hpp"

namespace lagom {

const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Ring: return "RING";
    case Algorithm::Tree: return "TREE";
  }
  return "?";
}

const char* to_string(Protocol p) {
  switch (p) {
    case Protocol::Simple: return "SIMPLE";
    case Protocol::Ll: return "LL";
    case Protocol::Ll128: return "LL128";
  }
  return "?";
}

const char* to_string(Transport t) {
  switch (t) {
    case Transport::P2p: return "P2P";
    case Transport::Shm: return "SHM";
    case Transport::Net: return "NET";
  }
  return "?";
}

const char* to_string(Collective c) {
  switch (c) {
    case Collective::AllReduce: return "ALL_REDUCE";
    case Collective::AllGather: return "ALL_GATHER";
    case Collective::ReduceScatter: return "REDUCE_SCATTER";
    case Collective::AllToAll: return "ALL_TO_ALL";
  }
  return "?";
}

namespace {
[[noreturn]] void bad_enum(const std::string& kind, const std::string& value) {
  throw Error(ErrorCode::InvalidInput, kind, "unknown value '" + value + "'");
}
}  // namespace

Algorithm algorithm_from_string(const std::string& s) {
  if (s == "RING") return Algorithm::Ring;
  if (s == "TREE") return Algorithm::Tree;
  bad_enum("algorithm", s);
}

Protocol protocol_from_string(const std::string& s) {
  if (s == "SIMPLE") return Protocol::Simple;
  if (s == "LL") return Protocol::Ll;
  if (s == "LL128") return Protocol::Ll128;
  bad_enum("protocol", s);
}

Transport transport_from_string(const std::string& s) {
  if (s == "P2P") return Transport::P2p;
  if (s == "SHM") return Transport::Shm;
  if (s == "NET") return Transport::Net;
  bad_enum("transport", s);
}

Collective collective_from_string(const std::string& s) {
  if (s == "ALL_REDUCE") return Collective::AllReduce;
  if (s == "ALL_GATHER") return Collective::AllGather;
  if (s == "REDUCE_SCATTER") return Collective::ReduceScatter;
  if (s == "ALL_TO_ALL") return Collective::AllToAll;
  bad_enum("collective", s);
}

bool in_thread_ladder(int num_threads) {
  return std::find(kThreadLadder.begin(), kThreadLadder.end(), num_threads) !=
         kThreadLadder.end();
}

int max_channels(const CommOp& op, const GpuSpec& gpu) {
  return std::min(op.bounds.nc_max, gpu.num_sms - 1);
}

namespace {

[[noreturn]] void invalid(const std::string& field, const std::string& msg) {
  throw Error(ErrorCode::InvalidWorkload, field, msg);
}

void check_gpu(const GpuSpec& gpu) {
  if (gpu.num_sms < 2) invalid("gpu.num_sms", "must be >= 2");
  if (!(gpu.peak_mem_bw > 0)) invalid("gpu.peak_mem_bw", "must be > 0");
  if (!(gpu.link_bw > 0)) invalid("gpu.link_bw", "must be > 0");
  if (!(gpu.comm_bw_cap_fraction > 0 && gpu.comm_bw_cap_fraction < 1))
    invalid("gpu.comm_bw_cap_fraction", "must lie in (0, 1)");
  if (!(gpu.compute_on_comm_slowdown >= 0))
    invalid("gpu.compute_on_comm_slowdown", "must be >= 0");
}

void check_compute(const ComputeOp& op, const std::string& prefix) {
  if (op.id.empty()) invalid(prefix + ".id", "must be non-empty");
  if (op.total_blocks < 1) invalid(prefix + ".total_blocks", "must be >= 1");
  if (op.blocks_per_sm < 1) invalid(prefix + ".blocks_per_sm", "must be >= 1");
  if (op.bytes_per_block < 0)
    invalid(prefix + ".bytes_per_block", "must be >= 0");
  if (!(op.base_wave_time >= 0))
    invalid(prefix + ".base_wave_time", "must be >= 0");
}

void check_comm(const CommOp& op, const std::string& prefix,
                const std::unordered_set<std::string>& compute_ids) {
  if (op.id.empty()) invalid(prefix + ".id", "must be non-empty");
  if (op.message_bytes < 1) invalid(prefix + ".message_bytes", "must be >= 1");
  if (op.ready_after && !compute_ids.contains(*op.ready_after))
    invalid(prefix + ".ready_after",
            "names no compute op in this workload: '" + *op.ready_after + "'");
  if (op.bounds.nc_max < 1)
    invalid(prefix + ".bounds.nc_max", "num_channels bound must be >= 1");
  if (op.bounds.c_min < kKiB)
    invalid(prefix + ".bounds.c_min", "must be >= 1 KiB");
  if (op.bounds.c_min % kKiB != 0)
    invalid(prefix + ".bounds.c_min", "must be a multiple of 1 KiB");
  if (op.bounds.c_max < op.bounds.c_min)
    invalid(prefix + ".bounds.c_max", "must be >= c_min");
  if (op.bounds.c_max % kKiB != 0)
    invalid(prefix + ".bounds.c_max", "must be a multiple of 1 KiB");
}

}  // namespace

const Workload& validate(const Workload& workload) {
  check_gpu(workload.gpu);
  if (workload.compute_ops.empty() && workload.comm_ops.empty())
    invalid("workload", "must contain at least one op");

  std::unordered_set<std::string> compute_ids;
  for (std::size_t i = 0; i < workload.compute_ops.size(); ++i) {
    const auto& op = workload.compute_ops[i];
    const std::string prefix = "compute_ops[" + std::to_string(i) + "]";
    check_compute(op, prefix);
    if (!compute_ids.insert(op.id).second)
      invalid(prefix + ".id", "duplicate id '" + op.id + "'");
  }

  std::unordered_set<std::string> comm_ids;
  for (std::size_t j = 0; j < workload.comm_ops.size(); ++j) {
    const auto& op = workload.comm_ops[j];
    const std::string prefix = "comm_ops[" + std::to_string(j) + "]";
    check_comm(op, prefix, compute_ids);
    if (!comm_ids.insert(op.id).second)
      invalid(prefix + ".id", "duplicate id '" + op.id + "'");
  }
  return workload;
}

void validate_config(const CommConfig& cfg, const CommOp& op, const GpuSpec& gpu,
                     const std::string& field_prefix) {
  if (cfg.num_channels < 1)
    invalid(field_prefix + ".num_channels", "must be >= 1");
  if (cfg.num_channels > max_channels(op, gpu))
    invalid(field_prefix + ".num_channels",
            "exceeds min(nc_max, num_sms - 1) = " +
                std::to_string(max_channels(op, gpu)));
  if (!in_thread_ladder(cfg.num_threads))
    invalid(field_prefix + ".num_threads",
            "must be one of {64, 128, ..., 640}");
  if (cfg.chunk_size % kKiB != 0)
    invalid(field_prefix + ".chunk_size", "must be a multiple of 1 KiB");
  if (cfg.chunk_size < op.bounds.c_min || cfg.chunk_size > op.bounds.c_max)
    invalid(field_prefix + ".chunk_size",
            "must lie in [" + std::to_string(op.bounds.c_min) + ", " +
                std::to_string(op.bounds.c_max) + "]");
}

}  // namespace lagom
