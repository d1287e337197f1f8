// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "lagom/commperf.hpp"
#include "lagom/model.hpp"

namespace lagom {

struct OracleResult {
  std::vector<CommConfig> configs;
  double makespan = 0.0;
  std::int64_t evaluations = 0;
};

/// Exhaustive joint grid search: simulates every assignment in the cross
/// product of the per-comm grids and returns the argmin makespan. Ties keep
/// the lexicographically earliest assignment (enumeration order). Throws
/// Error(ErrorCode::GridTooLarge) when the product exceeds limit.
OracleResult exhaustive(const Workload& workload,
                        const std::vector<std::vector<CommConfig>>& grids,
                        const SubspaceParams& params, std::int64_t limit);

struct NaiveResult {
  std::vector<CommConfig> configs;
  double makespan = 0.0;
  int profile_calls = 0;
};

/// The strawman baseline: tunes each comm in index order to its standalone
/// communication-time minimum (greedy growth from the minimum config,
/// stopping at the first non-improvement), freezing it before moving on.
NaiveResult sequential_naive(const Workload& workload,
                             const SubspaceParams& params);

/// Default test grid per comm: NC in {1,2,4,8,16} x C in {64,256,1024,2048}
/// KiB, NT fixed at 128, subspace chosen by select_subspace. Values outside
/// a comm's bounds are dropped.
std::vector<std::vector<CommConfig>> default_grids(const Workload& workload,
                                                   const SubspaceParams& params);

}  // namespace lagom
