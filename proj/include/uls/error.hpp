#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace uls {

enum class ErrorCode {
  InvalidArgument,
  NonPositiveStreet,
  DimensionOverflow,
  CapUnsatisfiable,
  HighwayOverlap,
  DegenerateLink,
  PlacementExhausted,
  NoHighways,
  InsufficientData,
  EmptySupport,
  Format,
};

std::string_view to_string(ErrorCode code);

// Every library failure is reported through this type; `code()` lets the CLI
// map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace uls
