// SPDX-License-Identifier: Apache-2.0
#include "lagom/oracle.hpp"

#include <limits>

#include "lagom/error.hpp"
#include "lagom/simulator.hpp"
#include "lagom/tuner.hpp"

namespace lagom {

OracleResult exhaustive(const Workload& workload,
                        const std::vector<std::vector<CommConfig>>& grids,
                        const SubspaceParams& params, std::int64_t limit) {
  validate(workload);
  if (grids.size() != workload.comm_ops.size())
    throw Error(ErrorCode::InvalidWorkload, "grids",
                "expected one grid per comm op");
  unsigned __int128 product = 1;
  for (std::size_t j = 0; j < grids.size(); ++j) {
    if (grids[j].empty())
      throw Error(ErrorCode::InvalidWorkload, "grids[" + std::to_string(j) + "]",
                  "grid must be non-empty");
    product *= grids[j].size();
    if (product > (unsigned __int128)1 << 100) break;  // beyond any limit
  }
  if (limit < 0 || product > static_cast<unsigned __int128>(limit)) {
    const std::string size_text =
        product > (unsigned __int128)1 << 100
            ? "more than 2^100"
            : std::to_string(static_cast<unsigned long long>(product));
    throw Error(ErrorCode::GridTooLarge, "grid",
                "joint grid has " + size_text + " points, limit is " +
                    std::to_string(limit));
  }

  OracleResult out;
  out.makespan = std::numeric_limits<double>::infinity();

  std::vector<std::size_t> index(grids.size(), 0);
  std::vector<CommConfig> assignment(grids.size());
  while (true) {
    for (std::size_t j = 0; j < grids.size(); ++j)
      assignment[j] = grids[j][index[j]];
    const SimResult r = simulate(workload, assignment, params);
    ++out.evaluations;
    // Strict improvement keeps the lexicographically earliest optimum.
    if (r.makespan < out.makespan) {
      out.makespan = r.makespan;
      out.configs = assignment;
    }
    // Odometer step, last index fastest.
    std::size_t pos = grids.size();
    while (pos > 0) {
      --pos;
      if (++index[pos] < grids[pos].size()) break;
      index[pos] = 0;
      if (pos == 0) return out;
    }
    if (grids.empty()) break;
  }
  return out;
}

NaiveResult sequential_naive(const Workload& workload,
                             const SubspaceParams& params) {
  validate(workload);
  const std::size_t n = workload.comm_ops.size();
  NaiveResult out;
  if (n == 0) {
    out.makespan = profile(workload, {}, params).makespan;
    out.profile_calls = 1;
    return out;
  }

  std::vector<StepBounds> bounds;
  std::vector<CommConfig> configs;
  for (const CommOp& op : workload.comm_ops) {
    bounds.push_back(bounds_for(op, workload.gpu));
    configs.push_back(
        minimum_config(select_subspace(op, workload.gpu, params), bounds.back()));
  }

  int calls = 0;
  auto measure = [&]() {
    ++calls;
    return profile(workload, configs, params);
  };

  ProfileResult cur = measure();
  for (std::size_t j = 0; j < n; ++j) {
    double x_prev = cur.comm_times[j];
    double best_x = x_prev;
    CommConfig best_cfg = configs[j];
    double lr = 0.0;
    while (true) {
      const CommConfig next = grow_config(configs[j], lr, bounds[j]);
      if (next == configs[j]) break;
      configs[j] = next;
      cur = measure();
      const double x_new = cur.comm_times[j];
      if (x_new < best_x) {
        best_x = x_new;
        best_cfg = next;
      }
      if (x_new >= x_prev) break;  // no strict improvement: standalone optimum
      lr = (x_prev - x_new) / x_new;
      x_prev = x_new;
    }
    if (configs[j] != best_cfg) {
      configs[j] = best_cfg;
      cur = measure();
    }
  }

  out.configs = std::move(configs);
  out.makespan = cur.makespan;
  out.profile_calls = calls;
  return out;
}

std::vector<std::vector<CommConfig>> default_grids(const Workload& workload,
                                                   const SubspaceParams& params) {
  static constexpr int kChannels[] = {1, 2, 4, 8, 16};
  static constexpr std::int64_t kChunks[] = {64 * kKiB, 256 * kKiB, 1024 * kKiB,
                                             2048 * kKiB};
  std::vector<std::vector<CommConfig>> grids;
  grids.reserve(workload.comm_ops.size());
  for (const CommOp& op : workload.comm_ops) {
    const SubspaceKey key = select_subspace(op, workload.gpu, params);
    const StepBounds b = bounds_for(op, workload.gpu);
    std::vector<CommConfig> grid;
    for (int nc : kChannels) {
      if (nc > b.nc_max) continue;
      for (std::int64_t c : kChunks) {
        if (c < b.c_min || c > b.c_max) continue;
        CommConfig cfg = minimum_config(key, b);
        cfg.num_channels = nc;
        cfg.num_threads = 128;
        cfg.chunk_size = c;
        grid.push_back(cfg);
      }
    }
    grids.push_back(std::move(grid));
  }
  return grids;
}

}  // namespace lagom
