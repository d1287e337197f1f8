// SPDX-License-Identifier: Apache-2.0
#include "lagom/json_io.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

#include "lagom/error.hpp"

namespace lagom {

namespace {

constexpr const char* kTimeUnit = "us";
constexpr const char* kSizeUnit = "bytes";
constexpr const char* kBandwidthUnit = "bytes_per_us";

[[noreturn]] void bad_field(const std::string& field, const std::string& msg) {
  throw Error(ErrorCode::InvalidInput, field, msg);
}

const Json& require(const Json& doc, const std::string& key,
                    const std::string& context) {
  auto it = doc.find(key);
  if (it == doc.end()) bad_field(context + "." + key, "missing field");
  return *it;
}

double as_number(const Json& v, const std::string& field) {
  if (!v.is_number()) bad_field(field, "expected a number");
  return v.get<double>();
}

std::int64_t as_integer(const Json& v, const std::string& field) {
  if (!v.is_number_integer()) bad_field(field, "expected an integer");
  return v.get<std::int64_t>();
}

std::string as_string(const Json& v, const std::string& field) {
  if (!v.is_string()) bad_field(field, "expected a string");
  return v.get<std::string>();
}

void check_units(const Json& units) {
  const struct {
    const char* key;
    const char* expected;
  } wanted[] = {{"time", kTimeUnit}, {"size", kSizeUnit},
                {"bandwidth", kBandwidthUnit}};
  for (const auto& [key, expected] : wanted) {
    auto it = units.find(key);
    if (it != units.end() && it->get<std::string>() != expected)
      bad_field(std::string("units.") + key,
                std::string("this tool works in '") + expected + "'");
  }
}

}  // namespace

Json workload_to_json(const Workload& w) {
  Json doc;
  doc["units"] = {{"time", kTimeUnit},
                  {"size", kSizeUnit},
                  {"bandwidth", kBandwidthUnit}};
  doc["gpu"] = {{"num_sms", w.gpu.num_sms},
                {"peak_mem_bw", w.gpu.peak_mem_bw},
                {"link_bw", w.gpu.link_bw},
                {"comm_bw_cap_fraction", w.gpu.comm_bw_cap_fraction},
                {"compute_on_comm_slowdown", w.gpu.compute_on_comm_slowdown}};
  doc["compute_ops"] = Json::array();
  for (const ComputeOp& op : w.compute_ops) {
    doc["compute_ops"].push_back({{"id", op.id},
                                  {"total_blocks", op.total_blocks},
                                  {"blocks_per_sm", op.blocks_per_sm},
                                  {"bytes_per_block", op.bytes_per_block},
                                  {"base_wave_time", op.base_wave_time}});
  }
  doc["comm_ops"] = Json::array();
  for (const CommOp& op : w.comm_ops) {
    Json j = {{"id", op.id},
              {"collective", to_string(op.collective)},
              {"message_bytes", op.message_bytes}};
    if (op.ready_after) j["ready_after"] = *op.ready_after;
    j["bounds"] = {{"nc_max", op.bounds.nc_max},
                   {"c_min", op.bounds.c_min},
                   {"c_max", op.bounds.c_max}};
    doc["comm_ops"].push_back(std::move(j));
  }
  return doc;
}

Workload workload_from_json(const Json& doc) {
  if (!doc.is_object()) bad_field("workload", "expected a JSON object");
  if (auto it = doc.find("units"); it != doc.end()) check_units(*it);

  Workload w;
  const Json& gpu = require(doc, "gpu", "workload");
  w.gpu.num_sms =
      static_cast<int>(as_integer(require(gpu, "num_sms", "gpu"), "gpu.num_sms"));
  w.gpu.peak_mem_bw =
      as_number(require(gpu, "peak_mem_bw", "gpu"), "gpu.peak_mem_bw");
  w.gpu.link_bw = as_number(require(gpu, "link_bw", "gpu"), "gpu.link_bw");
  w.gpu.comm_bw_cap_fraction =
      as_number(require(gpu, "comm_bw_cap_fraction", "gpu"),
                "gpu.comm_bw_cap_fraction");
  if (auto it = gpu.find("compute_on_comm_slowdown"); it != gpu.end())
    w.gpu.compute_on_comm_slowdown = as_number(*it, "gpu.compute_on_comm_slowdown");

  for (const Json& j : require(doc, "compute_ops", "workload")) {
    const std::string ctx = "compute_ops[" + std::to_string(w.compute_ops.size()) + "]";
    ComputeOp op;
    op.id = as_string(require(j, "id", ctx), ctx + ".id");
    op.total_blocks = as_integer(require(j, "total_blocks", ctx), ctx + ".total_blocks");
    op.blocks_per_sm =
        as_integer(require(j, "blocks_per_sm", ctx), ctx + ".blocks_per_sm");
    op.bytes_per_block =
        as_integer(require(j, "bytes_per_block", ctx), ctx + ".bytes_per_block");
    op.base_wave_time =
        as_number(require(j, "base_wave_time", ctx), ctx + ".base_wave_time");
    w.compute_ops.push_back(std::move(op));
  }

  for (const Json& j : require(doc, "comm_ops", "workload")) {
    const std::string ctx = "comm_ops[" + std::to_string(w.comm_ops.size()) + "]";
    CommOp op;
    op.id = as_string(require(j, "id", ctx), ctx + ".id");
    op.collective = collective_from_string(
        as_string(require(j, "collective", ctx), ctx + ".collective"));
    op.message_bytes =
        as_integer(require(j, "message_bytes", ctx), ctx + ".message_bytes");
    if (auto it = j.find("ready_after"); it != j.end() && !it->is_null())
      op.ready_after = as_string(*it, ctx + ".ready_after");
    if (auto it = j.find("bounds"); it != j.end()) {
      const Json& b = *it;
      if (auto f = b.find("nc_max"); f != b.end())
        op.bounds.nc_max = static_cast<int>(as_integer(*f, ctx + ".bounds.nc_max"));
      if (auto f = b.find("c_min"); f != b.end())
        op.bounds.c_min = as_integer(*f, ctx + ".bounds.c_min");
      if (auto f = b.find("c_max"); f != b.end())
        op.bounds.c_max = as_integer(*f, ctx + ".bounds.c_max");
    }
    w.comm_ops.push_back(std::move(op));
  }
  return w;
}

Json config_to_json(const CommConfig& cfg) {
  return Json{{"algorithm", to_string(cfg.algorithm)},
              {"protocol", to_string(cfg.protocol)},
              {"transport", to_string(cfg.transport)},
              {"num_channels", cfg.num_channels},
              {"num_threads", cfg.num_threads},
              {"chunk_size", cfg.chunk_size}};
}

CommConfig config_from_json(const Json& doc) {
  CommConfig cfg;
  cfg.algorithm = algorithm_from_string(
      as_string(require(doc, "algorithm", "config"), "config.algorithm"));
  cfg.protocol = protocol_from_string(
      as_string(require(doc, "protocol", "config"), "config.protocol"));
  cfg.transport = transport_from_string(
      as_string(require(doc, "transport", "config"), "config.transport"));
  cfg.num_channels = static_cast<int>(as_integer(
      require(doc, "num_channels", "config"), "config.num_channels"));
  cfg.num_threads = static_cast<int>(
      as_integer(require(doc, "num_threads", "config"), "config.num_threads"));
  cfg.chunk_size =
      as_integer(require(doc, "chunk_size", "config"), "config.chunk_size");
  return cfg;
}

Json configs_to_json(const std::vector<CommConfig>& configs) {
  Json arr = Json::array();
  for (const CommConfig& cfg : configs) arr.push_back(config_to_json(cfg));
  return Json{{"configs", std::move(arr)}};
}

std::vector<CommConfig> configs_from_json(const Json& doc) {
  const Json* arr = &doc;
  if (doc.is_object()) arr = &require(doc, "configs", "configs");
  if (!arr->is_array()) bad_field("configs", "expected an array");
  std::vector<CommConfig> out;
  out.reserve(arr->size());
  for (const Json& j : *arr) out.push_back(config_from_json(j));
  return out;
}

Json params_to_json(const SubspaceParams& params) {
  Json doc;
  for (const SubspaceKey& key : params.keys()) {
    const SubspaceCoeffs& c = params.at(key);
    doc[to_string(key)] = {{"base_latency", c.base_latency},
                           {"per_channel_bw", c.per_channel_bw},
                           {"per_chunk_overhead", c.per_chunk_overhead},
                           {"per_channel_setup", c.per_channel_setup},
                           {"mem_coeff", c.mem_coeff},
                           {"chunk_knee", c.chunk_knee},
                           {"nt_floor", c.nt_floor}};
  }
  Json factors;
  for (const auto& [collective, factor] : params.collective_factors())
    factors[to_string(collective)] = factor;
  doc["collective_factors"] = std::move(factors);
  return doc;
}

SubspaceParams params_from_json(const Json& doc) {
  if (!doc.is_object()) bad_field("params", "expected a JSON object");
  SubspaceParams params;
  // Start from an empty table but keep default collective factors.
  for (const auto& [key, value] : doc.items()) {
    if (key == "collective_factors") {
      for (const auto& [name, factor] : value.items())
        params.set_collective_factor(collective_from_string(name),
                                     as_number(factor, "collective_factors." + name));
      continue;
    }
    const std::string ctx = "params['" + key + "']";
    SubspaceCoeffs c;
    c.base_latency = as_number(require(value, "base_latency", ctx), ctx);
    c.per_channel_bw = as_number(require(value, "per_channel_bw", ctx), ctx);
    c.per_chunk_overhead =
        as_number(require(value, "per_chunk_overhead", ctx), ctx);
    c.per_channel_setup = as_number(require(value, "per_channel_setup", ctx), ctx);
    c.mem_coeff = as_number(require(value, "mem_coeff", ctx), ctx);
    c.chunk_knee = as_integer(require(value, "chunk_knee", ctx), ctx);
    c.nt_floor = as_number(require(value, "nt_floor", ctx), ctx);
    if (c.base_latency < 0 || c.per_chunk_overhead < 0 || c.per_channel_setup < 0)
      bad_field(ctx, "latency and overhead coefficients must be >= 0");
    if (!(c.per_channel_bw > 0)) bad_field(ctx, "per_channel_bw must be > 0");
    if (!(c.nt_floor > 0 && c.nt_floor <= 1))
      bad_field(ctx, "nt_floor must lie in (0, 1]");
    if (c.mem_coeff < 0) bad_field(ctx, "mem_coeff must be >= 0");
    if (c.chunk_knee < kKiB) bad_field(ctx, "chunk_knee must be >= 1 KiB");
    params.set(subspace_key_from_string(key), c);
  }
  if (params.empty())
    bad_field("params", "document defines no subspaces");
  return params;
}

Json trace_to_json(const SimResult& result) {
  Json events = Json::array();
  for (const TimelineEvent& ev : result.timeline) {
    Json e = {{"name", ev.op_id},
              {"cat", ev.stream},
              {"ph", "X"},
              {"ts", ev.start},
              {"dur", ev.duration},
              {"pid", 0},
              {"tid", ev.stream == "compute" ? 1 : 2}};
    if (ev.stream == "compute") e["args"] = {{"blocks", ev.blocks}};
    events.push_back(std::move(e));
  }
  return events;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::IoFailure, path.string(), "cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad())
    throw Error(ErrorCode::IoFailure, path.string(), "read failed");
  return ss.str();
}

Json parse_json(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // e.byte is 1-based; derive line/column for the diagnostic.
    std::size_t line = 1, column = 1;
    const std::size_t stop = std::min(text.size(), e.byte > 0 ? e.byte - 1 : 0);
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw Error(ErrorCode::InvalidInput, origin,
                "parse error at line " + std::to_string(line) + ", column " +
                    std::to_string(column) + ": " + e.what());
  }
}

Workload load_workload(const std::filesystem::path& path) {
  return workload_from_json(parse_json(read_file(path), path.string()));
}

std::vector<CommConfig> load_configs(const std::filesystem::path& path) {
  return configs_from_json(parse_json(read_file(path), path.string()));
}

SubspaceParams load_params(const std::filesystem::path& path) {
  return params_from_json(parse_json(read_file(path), path.string()));
}

void save_json(const Json& doc, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(ErrorCode::IoFailure, path.string(), "cannot open for writing");
  out << doc.dump(2) << '\n';
  if (!out)
    throw Error(ErrorCode::IoFailure, path.string(), "write failed");
}

void export_trace(const SimResult& result, const std::filesystem::path& path) {
  save_json(trace_to_json(result), path);
}

std::string file_digest(const std::filesystem::path& path) {
  const std::string data = read_file(path);
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char byte : data) {
    hash ^= byte;
    hash *= 0x100000001b3ull;
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kHex[hash & 0xf];
    hash >>= 4;
  }
  return out;
}

}  // namespace lagom
