// SPDX-License-Identifier: Apache-2.0
#include "lagom/commperf.hpp"

#include <algorithm>
#include <cmath>

#include "lagom/error.hpp"

namespace lagom {

std::string to_string(const SubspaceKey& key) {
  std::string out = to_string(key.algorithm);
  out += '/';
  out += to_string(key.protocol);
  out += '/';
  out += to_string(key.transport);
  return out;
}

SubspaceKey subspace_key_from_string(const std::string& s) {
  const auto first = s.find('/');
  const auto second = s.find('/', first + 1);
  if (first == std::string::npos || second == std::string::npos)
    throw Error(ErrorCode::InvalidInput, "subspace",
                "expected 'ALGO/PROTO/TRANSPORT', got '" + s + "'");
  return SubspaceKey{algorithm_from_string(s.substr(0, first)),
                     protocol_from_string(s.substr(first + 1, second - first - 1)),
                     transport_from_string(s.substr(second + 1))};
}

SubspaceKey subspace_key(const CommConfig& cfg) {
  return SubspaceKey{cfg.algorithm, cfg.protocol, cfg.transport};
}

void SubspaceParams::set(const SubspaceKey& key, const SubspaceCoeffs& coeffs) {
  table_[key] = coeffs;
}

bool SubspaceParams::contains(const SubspaceKey& key) const {
  return table_.contains(key);
}

const SubspaceCoeffs& SubspaceParams::at(const SubspaceKey& key) const {
  auto it = table_.find(key);
  if (it == table_.end())
    throw Error(ErrorCode::UnknownSubspace, "subspace",
                "no coefficients for '" + to_string(key) + "'");
  return it->second;
}

std::vector<SubspaceKey> SubspaceParams::keys() const {
  std::vector<SubspaceKey> out;
  out.reserve(table_.size());
  for (const auto& [key, _] : table_) out.push_back(key);
  return out;
}

double SubspaceParams::collective_factor(Collective c) const {
  auto it = factors_.find(c);
  return it == factors_.end() ? 1.0 : it->second;
}

void SubspaceParams::set_collective_factor(Collective c, double factor) {
  factors_[c] = factor;
}

SubspaceParams SubspaceParams::defaults() {
  SubspaceParams params;
  for (Algorithm a : {Algorithm::Ring, Algorithm::Tree}) {
    for (Protocol p : {Protocol::Simple, Protocol::Ll, Protocol::Ll128}) {
      for (Transport t : {Transport::P2p, Transport::Shm, Transport::Net}) {
        SubspaceCoeffs c;
        // Ring keeps full per-channel bandwidth; tree trades bandwidth for
        // lower startup latency.
        c.base_latency = (a == Algorithm::Ring) ? 15.0 : 10.0;
        c.per_channel_bw = (a == Algorithm::Ring) ? 25.0 : 22.0;
        switch (p) {
          case Protocol::Simple: break;
          case Protocol::Ll:
            c.base_latency *= 0.4;
            c.per_channel_bw *= 0.72;
            c.mem_coeff = 0.35;
            break;
          case Protocol::Ll128:
            c.base_latency *= 0.6;
            c.per_channel_bw *= 0.92;
            c.mem_coeff = 0.45;
            break;
        }
        switch (t) {
          case Transport::P2p: break;
          case Transport::Shm:
            c.base_latency += 2.0;
            c.per_channel_bw *= 0.8;
            break;
          case Transport::Net:
            c.base_latency += 10.0;
            c.per_channel_bw *= 0.6;
            break;
        }
        params.set(SubspaceKey{a, p, t}, c);
      }
    }
  }
  return params;
}

double thread_efficiency(int num_threads, double nt_floor) {
  return nt_floor + (1.0 - nt_floor) * static_cast<double>(num_threads) / 640.0;
}

double comm_time(const CommOp& op, const CommConfig& cfg, const GpuSpec& gpu,
                 const SubspaceParams& params) {
  const SubspaceCoeffs& c = params.at(subspace_key(cfg));
  const double m =
      static_cast<double>(op.message_bytes) * params.collective_factor(op.collective);
  const double nc = static_cast<double>(cfg.num_channels);
  const double chunks =
      std::ceil(m / (nc * static_cast<double>(cfg.chunk_size)));
  const double eff_bw =
      std::min(nc * c.per_channel_bw * thread_efficiency(cfg.num_threads, c.nt_floor),
               gpu.link_bw);
  return c.base_latency + c.per_channel_setup * nc +
         chunks * c.per_chunk_overhead + m / eff_bw;
}

double mem_footprint(const CommConfig& cfg, const GpuSpec& gpu,
                     const SubspaceParams& params) {
  const SubspaceCoeffs& c = params.at(subspace_key(cfg));
  const double chunk = static_cast<double>(cfg.chunk_size);
  const double saturation = chunk / (chunk + static_cast<double>(c.chunk_knee));
  const double raw = c.mem_coeff * static_cast<double>(cfg.num_channels) *
                     saturation * c.per_channel_bw;
  return std::min(gpu.comm_bw_cap_fraction * gpu.peak_mem_bw, raw);
}

}  // namespace lagom
