// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "lagom/commperf.hpp"
#include "lagom/model.hpp"

namespace lagom {

using Json = nlohmann::ordered_json;

// Workload document: {"units": {...}, "gpu": {...}, "compute_ops": [...],
// "comm_ops": [...]}. Field names match the model types; units are fixed to
// us / bytes / bytes_per_us and rejected when they disagree.
Json workload_to_json(const Workload& workload);
Workload workload_from_json(const Json& doc);

Json config_to_json(const CommConfig& cfg);
CommConfig config_from_json(const Json& doc);

// Config list document: {"configs": [...]} (a bare array also parses).
Json configs_to_json(const std::vector<CommConfig>& configs);
std::vector<CommConfig> configs_from_json(const Json& doc);

// Subspace parameter document: a map from "RING/SIMPLE/P2P"-style keys to
// coefficient objects, plus the reserved "collective_factors" key.
Json params_to_json(const SubspaceParams& params);
SubspaceParams params_from_json(const Json& doc);

// Chrome trace event document: one complete ("ph":"X") event per op/wave,
// the compute and comm streams as distinct track ids, ts/dur in us.
Json trace_to_json(const SimResult& result);

Workload load_workload(const std::filesystem::path& path);
std::vector<CommConfig> load_configs(const std::filesystem::path& path);
SubspaceParams load_params(const std::filesystem::path& path);
void save_json(const Json& doc, const std::filesystem::path& path);
void export_trace(const SimResult& result, const std::filesystem::path& path);

/// Reads a file; throws Error(ErrorCode::IoFailure) when unreadable.
std::string read_file(const std::filesystem::path& path);

/// Parses JSON text; parse failures become Error(ErrorCode::InvalidInput)
/// with "line L, column C" in the message.
Json parse_json(const std::string& text, const std::string& origin);

/// FNV-1a 64-bit digest of a file's bytes, as 16 hex digits.
std::string file_digest(const std::filesystem::path& path);

}  // namespace lagom
