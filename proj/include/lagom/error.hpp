// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace lagom {

enum class ErrorCode {
  InvalidWorkload,
  InvalidInput,
  UnknownSubspace,
  SmExhaustion,
  BandwidthExhaustion,
  PartitionMismatch,
  GridTooLarge,
  IoFailure,
};

const char* to_string(ErrorCode code);

/// Structured error carrying a machine-readable code and the offending
/// field path (empty when not tied to a specific field).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string field, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  const std::string& field() const noexcept { return field_; }

 private:
  ErrorCode code_;
  std::string field_;
};

}  // namespace lagom
