// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: simulate, tune, oracle, compare, sweep, gen.
// Exit codes: 0 ok, 2 validation error, 3 I/O error, 4 tuning budget
// exhausted, 5 oracle grid too large.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lagom/error.hpp"
#include "lagom/json_io.hpp"
#include "lagom/oracle.hpp"
#include "lagom/simulator.hpp"
#include "lagom/sweep.hpp"
#include "lagom/tuner.hpp"
#include "lagom/version.hpp"
#include "lagom/workloads.hpp"

namespace {

using lagom::Json;

constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;
constexpr int kExitBudget = 4;
constexpr int kExitGrid = 5;

int exit_code_for(const lagom::Error& e) {
  switch (e.code()) {
    case lagom::ErrorCode::IoFailure: return kExitIo;
    case lagom::ErrorCode::GridTooLarge: return kExitGrid;
    default: return kExitValidation;
  }
}

struct Inputs {
  std::string workload_path;
  std::string configs_path;
  std::string params_path;
};

lagom::SubspaceParams resolve_params(Inputs& in) {
  if (!in.params_path.empty()) return lagom::load_params(in.params_path);
  if (const char* env = std::getenv("LAGOM_PARAMS"); env && *env) {
    in.params_path = env;
    return lagom::load_params(env);
  }
  return lagom::SubspaceParams::defaults();
}

Json input_digests(const Inputs& in) {
  Json digests;
  if (!in.workload_path.empty())
    digests["workload"] = lagom::file_digest(in.workload_path);
  if (!in.configs_path.empty())
    digests["configs"] = lagom::file_digest(in.configs_path);
  if (!in.params_path.empty())
    digests["params"] = lagom::file_digest(in.params_path);
  return digests;
}

Json report_header(const std::string& command, const Inputs& in) {
  Json doc;
  doc["version"] = lagom::kVersion;
  doc["command"] = command;
  doc["inputs"] = input_digests(in);
  return doc;
}

void emit(const Json& doc, const std::string& out_path) {
  if (out_path.empty())
    std::cout << doc.dump(2) << '\n';
  else
    lagom::save_json(doc, out_path);
}

std::int64_t parse_size(const std::string& token) {
  if (token.empty())
    throw lagom::Error(lagom::ErrorCode::InvalidInput, "value", "empty value");
  std::int64_t scale = 1;
  std::string digits = token;
  switch (token.back()) {
    case 'K': case 'k': scale = lagom::kKiB; digits.pop_back(); break;
    case 'M': case 'm': scale = lagom::kKiB * lagom::kKiB; digits.pop_back(); break;
    default: break;
  }
  std::size_t used = 0;
  const std::int64_t value = std::stoll(digits, &used);
  if (used != digits.size())
    throw lagom::Error(lagom::ErrorCode::InvalidInput, "value",
                       "cannot parse '" + token + "'");
  return value * scale;
}

std::vector<std::int64_t> parse_value_list(const std::string& csv) {
  std::vector<std::int64_t> out;
  std::size_t begin = 0;
  while (begin <= csv.size()) {
    const std::size_t end = csv.find(',', begin);
    const std::string token =
        csv.substr(begin, end == std::string::npos ? std::string::npos : end - begin);
    if (!token.empty()) out.push_back(parse_size(token));
    if (end == std::string::npos) break;
    begin = end + 1;
  }
  return out;
}

struct GridSpec {
  std::vector<int> channels{1, 2, 4, 8, 16};
  std::vector<std::int64_t> chunks{64 * lagom::kKiB, 256 * lagom::kKiB,
                                   1024 * lagom::kKiB, 2048 * lagom::kKiB};
  std::vector<int> threads{128};
};

GridSpec parse_grid_spec(const std::string& spec) {
  GridSpec grid;
  if (spec.empty()) return grid;
  std::size_t begin = 0;
  while (begin < spec.size()) {
    std::size_t end = spec.find(';', begin);
    if (end == std::string::npos) end = spec.size();
    const std::string part = spec.substr(begin, end - begin);
    const std::size_t eq = part.find('=');
    if (eq == std::string::npos)
      throw lagom::Error(lagom::ErrorCode::InvalidInput, "grid",
                         "expected name=v1,v2,... in '" + part + "'");
    const std::string name = part.substr(0, eq);
    const auto values = parse_value_list(part.substr(eq + 1));
    if (name == "nc") {
      grid.channels.assign(values.begin(), values.end());
    } else if (name == "c") {
      grid.chunks = values;
    } else if (name == "nt") {
      grid.threads.assign(values.begin(), values.end());
    } else {
      throw lagom::Error(lagom::ErrorCode::InvalidInput, "grid",
                         "unknown grid parameter '" + name + "'");
    }
    begin = end + 1;
  }
  return grid;
}

std::vector<std::vector<lagom::CommConfig>> build_grids(
    const lagom::Workload& workload, const lagom::SubspaceParams& params,
    const GridSpec& spec) {
  std::vector<std::vector<lagom::CommConfig>> grids;
  for (const lagom::CommOp& op : workload.comm_ops) {
    const auto key = lagom::select_subspace(op, workload.gpu, params);
    const auto bounds = lagom::bounds_for(op, workload.gpu);
    std::vector<lagom::CommConfig> grid;
    for (int nc : spec.channels) {
      if (nc < bounds.nc_min || nc > bounds.nc_max) continue;
      for (std::int64_t c : spec.chunks) {
        if (c < bounds.c_min || c > bounds.c_max) continue;
        for (int nt : spec.threads) {
          if (!lagom::in_thread_ladder(nt)) continue;
          lagom::CommConfig cfg = lagom::minimum_config(key, bounds);
          cfg.num_channels = nc;
          cfg.num_threads = nt;
          cfg.chunk_size = c;
          grid.push_back(cfg);
        }
      }
    }
    if (grid.empty())
      throw lagom::Error(lagom::ErrorCode::InvalidInput, "grid",
                         "grid excludes every config for comm '" + op.id + "'");
    grids.push_back(std::move(grid));
  }
  return grids;
}

std::vector<lagom::CommConfig> seed_configs(const lagom::Workload& workload,
                                            const lagom::SubspaceParams& params,
                                            const std::string& start) {
  std::vector<lagom::CommConfig> configs;
  for (const lagom::CommOp& op : workload.comm_ops) {
    const auto key = lagom::select_subspace(op, workload.gpu, params);
    const auto bounds = lagom::bounds_for(op, workload.gpu);
    lagom::CommConfig cfg = lagom::minimum_config(key, bounds);
    if (start == "nccl-default") {
      cfg.num_channels = std::min(8, bounds.nc_max);
      cfg.num_threads = 512;
      cfg.chunk_size = std::clamp<std::int64_t>(2048 * lagom::kKiB,
                                                bounds.c_min, bounds.c_max);
    }
    configs.push_back(cfg);
  }
  return configs;
}

Json profile_to_json(const lagom::ProfileResult& p) {
  return Json{{"X", p.total_comm}, {"Y", p.total_compute}, {"Z", p.makespan}};
}

Json tune_log_to_json(const lagom::Workload& workload,
                      const lagom::TuneRecord& rec) {
  Json j;
  j["iter"] = rec.iteration;
  if (rec.comm_index)
    j["comm_id"] = workload.comm_ops[static_cast<std::size_t>(*rec.comm_index)].id;
  else
    j["comm_id"] = nullptr;
  if (rec.comm_index) {
    j["config"] = lagom::config_to_json(rec.config);
    j["x"] = rec.comm_time;
  } else {
    j["config"] = nullptr;
    j["x"] = nullptr;
  }
  j["X"] = rec.total_comm;
  j["Y"] = rec.total_compute;
  j["Z"] = rec.makespan;
  Json h_table;
  Json done = Json::array();
  for (std::size_t k = 0; k < rec.priorities.size(); ++k) {
    h_table[workload.comm_ops[k].id] = rec.priorities[k];
    if (rec.done[k]) done.push_back(workload.comm_ops[k].id);
  }
  j["H_table"] = std::move(h_table);
  j["done"] = std::move(done);
  if (rec.priority_after)
    j["H_after"] = *rec.priority_after;
  else if (rec.comm_index)
    j["H_after"] = nullptr;
  j["already_optimal"] = rec.already_optimal;
  return j;
}

int cmd_simulate(Inputs in, const std::string& trace_path,
                 const std::string& out_path) {
  const lagom::Workload workload =
      lagom::validate(lagom::load_workload(in.workload_path));
  const auto configs = lagom::load_configs(in.configs_path);
  const auto params = resolve_params(in);

  const lagom::SimResult result = lagom::simulate(workload, configs, params);
  if (!trace_path.empty()) lagom::export_trace(result, trace_path);

  Json doc = report_header("simulate", in);
  doc["result"] = {{"X", result.total_comm},
                   {"Y", result.total_compute},
                   {"Z", result.makespan}};
  Json compute = Json::array();
  for (std::size_t i = 0; i < workload.compute_ops.size(); ++i)
    compute.push_back(
        {{"id", workload.compute_ops[i].id}, {"time_us", result.comp_times[i]}});
  Json comm = Json::array();
  for (std::size_t j = 0; j < workload.comm_ops.size(); ++j)
    comm.push_back(
        {{"id", workload.comm_ops[j].id}, {"time_us", result.comm_times[j]}});
  doc["result"]["compute"] = std::move(compute);
  doc["result"]["comm"] = std::move(comm);
  emit(doc, out_path);
  return 0;
}

int cmd_tune(Inputs in, const std::string& start, int budget,
             const std::string& log_path, const std::string& out_path) {
  const lagom::Workload workload =
      lagom::validate(lagom::load_workload(in.workload_path));
  const auto params = resolve_params(in);
  const auto initial = seed_configs(workload, params, start);

  const lagom::TuneResult result = lagom::tune(
      workload, initial, lagom::make_sim_profiler(workload, params), budget);

  if (!log_path.empty()) {
    std::ofstream log(log_path, std::ios::binary);
    if (!log)
      throw lagom::Error(lagom::ErrorCode::IoFailure, log_path,
                         "cannot open for writing");
    for (const auto& rec : result.log)
      log << tune_log_to_json(workload, rec).dump() << '\n';
  }

  Json doc = report_header("tune", in);
  doc["start"] = start;
  doc["budget"] = budget;
  doc["profile_calls"] = result.profile_calls;
  doc["budget_exhausted"] = result.budget_exhausted;
  doc["boundary_condition"] = result.boundary_condition;
  doc["initial_Z"] = result.initial_makespan;
  doc["final"] = profile_to_json(result.final_profile);
  Json configs = Json::array();
  for (std::size_t j = 0; j < result.configs.size(); ++j) {
    Json c = lagom::config_to_json(result.configs[j]);
    c["comm_id"] = workload.comm_ops[j].id;
    configs.push_back(std::move(c));
  }
  doc["configs"] = std::move(configs);
  emit(doc, out_path);
  return result.budget_exhausted ? kExitBudget : 0;
}

int cmd_oracle(Inputs in, const std::string& grid_spec, std::int64_t limit,
               const std::string& out_path) {
  const lagom::Workload workload =
      lagom::validate(lagom::load_workload(in.workload_path));
  const auto params = resolve_params(in);
  const auto grids = build_grids(workload, params, parse_grid_spec(grid_spec));

  const auto t0 = std::chrono::steady_clock::now();
  const lagom::OracleResult result =
      lagom::exhaustive(workload, grids, params, limit);
  const auto elapsed = std::chrono::duration_cast<std::chrono::microseconds>(
                           std::chrono::steady_clock::now() - t0)
                           .count();

  Json doc = report_header("oracle", in);
  doc["best_Z"] = result.makespan;
  doc["evaluations"] = result.evaluations;
  doc["wall_time_us"] = elapsed;
  Json configs = Json::array();
  for (std::size_t j = 0; j < result.configs.size(); ++j) {
    Json c = lagom::config_to_json(result.configs[j]);
    c["comm_id"] = workload.comm_ops[j].id;
    configs.push_back(std::move(c));
  }
  doc["best_configs"] = std::move(configs);
  emit(doc, out_path);
  return 0;
}

int cmd_compare(Inputs in, const std::string& grid_spec, std::int64_t limit,
                int budget) {
  const lagom::Workload workload =
      lagom::validate(lagom::load_workload(in.workload_path));
  const auto params = resolve_params(in);
  const auto grids = build_grids(workload, params, parse_grid_spec(grid_spec));

  const auto oracle = lagom::exhaustive(workload, grids, params, limit);
  const auto tuned =
      lagom::tune(workload, seed_configs(workload, params, "min"),
                  lagom::make_sim_profiler(workload, params), budget);
  const auto naive = lagom::sequential_naive(workload, params);

  std::cout.precision(17);
  std::cout << "method,Z,evaluations\n";
  std::cout << "exhaustive," << oracle.makespan << ',' << oracle.evaluations
            << '\n';
  std::cout << "tune," << tuned.final_profile.makespan << ','
            << tuned.profile_calls << '\n';
  std::cout << "naive," << naive.makespan << ',' << naive.profile_calls << '\n';
  return tuned.budget_exhausted ? kExitBudget : 0;
}

int cmd_sweep(Inputs in, const std::string& comm_id, const std::string& param,
              const std::string& values_csv, const std::string& out_path) {
  const lagom::Workload workload =
      lagom::validate(lagom::load_workload(in.workload_path));
  const auto params = resolve_params(in);

  std::vector<lagom::CommConfig> base;
  if (!in.configs_path.empty()) {
    base = lagom::load_configs(in.configs_path);
  } else {
    base = seed_configs(workload, params, "min");
    for (std::size_t j = 0; j < base.size(); ++j) {
      const auto bounds = lagom::bounds_for(workload.comm_ops[j], workload.gpu);
      base[j].num_channels = std::min(4, bounds.nc_max);
      base[j].num_threads = 128;
      base[j].chunk_size =
          std::clamp<std::int64_t>(1024 * lagom::kKiB, bounds.c_min, bounds.c_max);
    }
  }

  const auto rows =
      lagom::run_sweep(workload, base, params, comm_id,
                       lagom::sweep_param_from_string(param),
                       parse_value_list(values_csv));
  const std::string csv = lagom::sweep_csv(rows);
  if (out_path.empty()) {
    std::cout << csv;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out)
      throw lagom::Error(lagom::ErrorCode::IoFailure, out_path,
                         "cannot open for writing");
    out << csv;
  }
  return 0;
}

int cmd_gen(const std::string& pattern, int layers, std::uint64_t seed,
            int num_compute, int num_comm, const std::string& out_path) {
  lagom::Workload workload;
  if (pattern == "fsdp") {
    workload = lagom::gen_fsdp(layers, seed);
  } else if (pattern == "tp") {
    workload = lagom::gen_tp_domino(layers, seed);
  } else if (pattern == "ep") {
    workload = lagom::gen_ep_dualbatch(layers, seed);
  } else if (pattern == "allreduce-pair") {
    workload = lagom::gen_allreduce_pair();
  } else if (pattern == "random") {
    workload = lagom::gen_random(num_compute, num_comm, seed);
  } else {
    throw lagom::Error(lagom::ErrorCode::InvalidInput, "pattern",
                       "expected fsdp|tp|ep|allreduce-pair|random, got '" + pattern + "'");
  }
  lagom::validate(workload);
  const Json doc = lagom::workload_to_json(workload);
  if (out_path.empty())
    std::cout << doc.dump(2) << '\n';
  else
    lagom::save_json(doc, out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Communication/computation overlap simulator and co-tuner"};
  app.require_subcommand(1);

  Inputs in;
  std::string trace_path, out_path, log_path;
  std::string start = "min";
  std::string grid_spec;
  std::string comm_id, param, values_csv;
  std::string pattern;
  int budget = 500;
  std::int64_t limit = 1000000;
  int layers = 4;
  std::uint64_t seed = 1;
  int num_compute = 4, num_comm = 2;

  auto* simulate = app.add_subcommand("simulate", "Run one simulation");
  simulate->add_option("--workload", in.workload_path)->required();
  simulate->add_option("--configs", in.configs_path)->required();
  simulate->add_option("--params", in.params_path);
  simulate->add_option("--trace", trace_path);
  simulate->add_option("--out", out_path);

  auto* tune = app.add_subcommand("tune", "Co-tune every comm's config");
  tune->add_option("--workload", in.workload_path)->required();
  tune->add_option("--params", in.params_path);
  tune->add_option("--start", start)
      ->check(CLI::IsMember({"min", "nccl-default"}));
  tune->add_option("--budget", budget)->check(CLI::PositiveNumber);
  tune->add_option("--log", log_path);
  tune->add_option("--out", out_path);

  auto* oracle = app.add_subcommand("oracle", "Exhaustive joint grid search");
  oracle->add_option("--workload", in.workload_path)->required();
  oracle->add_option("--params", in.params_path);
  oracle->add_option("--grid", grid_spec);
  oracle->add_option("--limit", limit);
  oracle->add_option("--out", out_path);

  auto* compare =
      app.add_subcommand("compare", "Tuner vs naive vs exhaustive, as CSV");
  compare->add_option("--workload", in.workload_path)->required();
  compare->add_option("--params", in.params_path);
  compare->add_option("--grid", grid_spec);
  compare->add_option("--limit", limit);
  compare->add_option("--budget", budget)->check(CLI::PositiveNumber);

  auto* sweep = app.add_subcommand("sweep", "Sweep one parameter of one comm");
  sweep->add_option("--workload", in.workload_path)->required();
  sweep->add_option("--configs", in.configs_path);
  sweep->add_option("--params", in.params_path);
  sweep->add_option("--comm", comm_id)->required();
  sweep->add_option("--param", param)->required();
  sweep->add_option("--values", values_csv)->required();
  sweep->add_option("--out", out_path);

  auto* gen = app.add_subcommand("gen", "Generate a synthetic workload");
  gen->add_option("--pattern", pattern)->required();
  gen->add_option("--layers", layers);
  gen->add_option("--seed", seed);
  gen->add_option("--m", num_compute);
  gen->add_option("--n", num_comm);
  gen->add_option("--out", out_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return cmd_simulate(in, trace_path, out_path);
    if (tune->parsed()) return cmd_tune(in, start, budget, log_path, out_path);
    if (oracle->parsed()) return cmd_oracle(in, grid_spec, limit, out_path);
    if (compare->parsed()) return cmd_compare(in, grid_spec, limit, budget);
    if (sweep->parsed())
      return cmd_sweep(in, comm_id, param, values_csv, out_path);
    if (gen->parsed())
      return cmd_gen(pattern, layers, seed, num_compute, num_comm, out_path);
  } catch (const lagom::Error& e) {
    std::cerr << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return 0;
}
