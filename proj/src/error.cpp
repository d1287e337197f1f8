// SPDX-License-Identifier: Apache-2.0
#include "lagom/error.hpp"

namespace lagom {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidWorkload: return "INVALID_WORKLOAD";
    case ErrorCode::InvalidInput: return "INVALID_INPUT";
    case ErrorCode::UnknownSubspace: return "UNKNOWN_SUBSPACE";
    case ErrorCode::SmExhaustion: return "SM_EXHAUSTION";
    case ErrorCode::BandwidthExhaustion: return "BANDWIDTH_EXHAUSTION";
    case ErrorCode::PartitionMismatch: return "PARTITION_MISMATCH";
    case ErrorCode::GridTooLarge: return "GRID_TOO_LARGE";
    case ErrorCode::IoFailure: return "IO_FAILURE";
  }
  return "UNKNOWN";
}

namespace {
std::string format_what(ErrorCode code, const std::string& field,
                        const std::string& message) {
  std::string out = "[";
  out += to_string(code);
  out += "] ";
  if (!field.empty()) {
    out += field;
    out += ": ";
  }
  out += message;
  return out;
}
}  // namespace

Error::Error(ErrorCode code, std::string field, const std::string& message)
    : std::runtime_error(format_what(code, field, message)),
      code_(code),
      field_(std::move(field)) {}

}  // namespace lagom
