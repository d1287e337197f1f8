// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lagom/commperf.hpp"
#include "lagom/model.hpp"
#include "lagom/simulator.hpp"

namespace lagom {

/// Measures one joint config assignment; must be pure per the tuner contract.
using ProfileFn = std::function<ProfileResult(const std::vector<CommConfig>&)>;

/// Profiler backed by the simulator.
ProfileFn make_sim_profiler(const Workload& workload,
                            const SubspaceParams& params);

/// Priority of one tuning step: compute-time cost per unit of comm-time gain,
/// H = (Y' - Y) / (x_old - x_new). Lower means tune first. Returns nullopt
/// when x_old <= x_new: the communication is already at its optimum.
std::optional<double> compute_h(double total_compute_before,
                                double total_compute_after, double x_old,
                                double x_new);

/// Search range for one comm's resource parameters.
struct StepBounds {
  int nc_min = 1;
  int nc_max = 32;
  int nt_min = 64;
  std::int64_t c_min = 32 * kKiB;
  std::int64_t c_max = 4096 * kKiB;
};

StepBounds bounds_for(const CommOp& op, const GpuSpec& gpu);

/// The minimum-resource seed of a subspace: (NC_min, NT_min, C_min).
CommConfig minimum_config(const SubspaceKey& key, const StepBounds& bounds);

/// Multiplicative growth with a floor of one discrete step per parameter:
/// NC <- min(cap, max(NC+1, round(NC*(1+lr)))), NT <- next ladder value
/// >= NT*(1+lr), C <- min(cap, max(C + 1 KiB, 1 KiB * round(C*(1+lr)/1KiB))).
CommConfig grow_config(const CommConfig& current, double lr,
                       const StepBounds& bounds);

enum class StepOutcome {
  Grow,            // next candidate produced
  DoneRegression,  // x regressed: freeze, adopt best-seen config
  DoneCrossing,    // X' < Y': comm no longer the bottleneck, keep candidate
  DoneNoMove,      // every parameter at its cap, keep candidate
};

struct StepResult {
  StepOutcome outcome = StepOutcome::Grow;
  CommConfig next;
};

/// One resource-efficient step for a comm whose current candidate measured
/// (x_new, X', Y') and whose previous config measured x_prev.
StepResult step_resource(const CommConfig& current, double x_prev, double x_new,
                         double total_comm_after, double total_compute_after,
                         const StepBounds& bounds);

enum class DoneReason {
  NotDone,
  Regression,      // step_resource saw x' > x
  Crossing,        // step_resource saw X' < Y'
  NoMove,          // growth exhausted every cap
  AlreadyOptimal,  // H update hit a non-positive denominator
};

const char* to_string(DoneReason reason);

struct HistoryEntry {
  CommConfig config;
  double comm_time = 0.0;
  double total_comm = 0.0;
  double total_compute = 0.0;
  double makespan = 0.0;
};

/// Per-comm search state, exposed for audits and tests.
struct CommTuneState {
  CommConfig current;        // latest accepted candidate (or revert target)
  double x_previous = 0.0;   // measured x of the config before current
  double x_current = 0.0;    // measured x of current
  double last_total_comm = 0.0;
  double last_total_compute = 0.0;
  double priority = 0.01;    // H, initialized to 0.01 before first measurement
  bool done = false;
  DoneReason reason = DoneReason::NotDone;
  bool grown = false;        // ever moved beyond its initial config
  CommConfig best_config;    // config with the lowest observed makespan
  double best_makespan = 0.0;
  std::vector<HistoryEntry> history;
};

/// One record per profiler call. comm_index is empty for the initial probe
/// and the final verification call. Priorities/done flags are snapshotted at
/// selection time, before this call's H update.
struct TuneRecord {
  int iteration = 0;
  std::optional<int> comm_index;
  CommConfig config;
  double comm_time = 0.0;
  double total_comm = 0.0;
  double total_compute = 0.0;
  double makespan = 0.0;
  std::vector<double> priorities;
  std::vector<bool> done;
  std::optional<double> priority_after;  // H update; empty when none/optimal
  bool already_optimal = false;
};

struct TuneResult {
  std::vector<CommConfig> configs;
  ProfileResult final_profile;
  double initial_makespan = 0.0;
  int profile_calls = 0;
  bool budget_exhausted = false;
  int boundary_condition = 0;  // 1..3 per the terminal-state audit, 0 unknown
  std::vector<TuneRecord> log;
  std::vector<CommTuneState> states;
};

/// Priority-guided resource-efficient co-tuning of all comms in a workload.
///
/// Flow: one initial probe at the given configs seeds X, Y and every x_j;
/// then repeatedly pick the not-done comm with minimal H (ties: lowest
/// index), advance it one resource step, profile the new candidate, and
/// update its H. A comm freezes on regression (reverting to its best-seen
/// config), on X' < Y', on exhausted growth, or on a non-positive H
/// denominator. Returns the best-seen assignment if the assembled final
/// configs measure worse, so the result never regresses past the start.
TuneResult tune(const Workload& workload,
                const std::vector<CommConfig>& initial_configs,
                const ProfileFn& profiler, int budget);

/// Picks the (A,P,T) subspace minimizing standalone comm_time at the
/// minimum resource config; fixed before resource tuning.
SubspaceKey select_subspace(const CommOp& op, const GpuSpec& gpu,
                            const SubspaceParams& params);

/// Terminal-state audit. Returns the first satisfied condition:
/// 1 - no comm grew beyond its initial config and X <= Y;
/// 2 - X > Y and every grown comm stopped at its standalone optimum;
/// 3 - |X - Y| lies within one observed step's effect on (X, Y).
/// Returns 0 when none holds (e.g. the budget ran out mid-search).
int check_boundary(const std::vector<CommConfig>& initial,
                   const TuneResult& result);

}  // namespace lagom
