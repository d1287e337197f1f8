// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

#include "lagom/model.hpp"

namespace lagom {

/// (Algorithm, Protocol, Transport) triple naming one tuning subspace.
struct SubspaceKey {
  Algorithm algorithm = Algorithm::Ring;
  Protocol protocol = Protocol::Simple;
  Transport transport = Transport::P2p;

  bool operator==(const SubspaceKey&) const = default;
  auto operator<=>(const SubspaceKey&) const = default;
};

std::string to_string(const SubspaceKey& key);          // "RING/SIMPLE/P2P"
SubspaceKey subspace_key_from_string(const std::string& s);
SubspaceKey subspace_key(const CommConfig& cfg);

/// Calibration coefficients of one subspace's synthetic performance model.
struct SubspaceCoeffs {
  double base_latency = 15.0;       // alpha, us
  double per_channel_bw = 25.0;     // bytes/us contributed per channel
  double per_chunk_overhead = 2.0;  // us per chunk
  double per_channel_setup = 0.5;   // zeta, us per channel
  double mem_coeff = 0.5;           // kappa, scales the bandwidth footprint
  std::int64_t chunk_knee = 128 * kKiB;  // half-saturation chunk size
  double nt_floor = 0.85;           // eta0, efficiency at NT -> 0

  bool operator==(const SubspaceCoeffs&) const = default;
};

/// Keyed coefficient table plus per-collective traffic factors.
class SubspaceParams {
 public:
  static SubspaceParams defaults();

  void set(const SubspaceKey& key, const SubspaceCoeffs& coeffs);
  bool contains(const SubspaceKey& key) const;
  /// Throws Error(ErrorCode::UnknownSubspace) when absent.
  const SubspaceCoeffs& at(const SubspaceKey& key) const;
  std::vector<SubspaceKey> keys() const;
  bool empty() const { return table_.empty(); }

  double collective_factor(Collective c) const;
  void set_collective_factor(Collective c, double factor);
  const std::map<Collective, double>& collective_factors() const {
    return factors_;
  }

  bool operator==(const SubspaceParams&) const = default;

 private:
  std::map<SubspaceKey, SubspaceCoeffs> table_;
  // AllReduce moves reduce+broadcast traffic, so it defaults to 2x.
  std::map<Collective, double> factors_{{Collective::AllReduce, 2.0},
                                        {Collective::AllGather, 1.0},
                                        {Collective::ReduceScatter, 1.0},
                                        {Collective::AllToAll, 1.0}};
};

/// Channel efficiency eta(NT) = eta0 + (1 - eta0) * NT / 640.
double thread_efficiency(int num_threads, double nt_floor);

/// Execution time of one communication under a config, microseconds.
/// x = alpha + zeta*NC + chunks*c_over + m_eff/eff_bw with
/// chunks = ceil(m_eff / (NC*C)) and eff_bw = min(NC*b_chan*eta(NT), link_bw).
double comm_time(const CommOp& op, const CommConfig& cfg, const GpuSpec& gpu,
                 const SubspaceParams& params);

/// Global-memory bandwidth a running communication consumes, bytes/us.
/// V = min(phi*peak, kappa * NC * C/(C + knee) * b_chan); always < peak.
double mem_footprint(const CommConfig& cfg, const GpuSpec& gpu,
                     const SubspaceParams& params);

}  // namespace lagom
