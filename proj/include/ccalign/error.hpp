#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ccalign {

enum class ErrorCode {
  malformed_url,
  untaggable,
  configuration,
  empty_document,
  length_mismatch,
  dimension_mismatch,
  undefined_similarity,
  undefined_metric,
  insufficient_data,
  missing_vectors,
  io,
  format,
  usage,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-checkable error category.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ccalign
