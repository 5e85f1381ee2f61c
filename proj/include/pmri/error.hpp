#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pmri {

enum class ErrorCode {
  kInvalidArgument,
  kDimMismatch,
  kInvalidGeometry,
  kAcsTooSmall,
  kSingularSystem,
  kMissingOffsetWeights,
  kNonFiniteInput,
  kTooSmall,
  kBadMagic,
  kUnsupportedVersion,
  kTruncatedPayload,
  kDimOverflow,
  kIo,
};

std::string_view to_string(ErrorCode code) noexcept;

// All library failures are reported through this type. what() starts with the
// error name so the CLI can print a single diagnostic line.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pmri
