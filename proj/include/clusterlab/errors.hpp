#pragma once

#include <stdexcept>
#include <string>

namespace clusterlab {

enum class ErrorCode {
  invalid_region,
  invalid_cluster,
  invalid_argument,
  malformed_mesh,
  empty_boundary,
  unsupported_representation,
  hypothesis_violated,
  insufficient_depth,
  not_fat,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_region: return "invalid-region";
    case ErrorCode::invalid_cluster: return "invalid-cluster";
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::malformed_mesh: return "malformed-mesh";
    case ErrorCode::empty_boundary: return "empty-boundary";
    case ErrorCode::unsupported_representation: return "unsupported-representation";
    case ErrorCode::hypothesis_violated: return "hypothesis-violated";
    case ErrorCode::insufficient_depth: return "insufficient-depth";
    case ErrorCode::not_fat: return "not-fat";
  }
  return "unknown";
}

/// Precondition failure raised by every module. Internal invariant breaks use
/// std::logic_error instead, so callers can tell the two apart.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace clusterlab
