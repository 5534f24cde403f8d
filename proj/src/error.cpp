#include "uls/error.hpp"

namespace uls {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonPositiveStreet: return "NonPositiveStreet";
    case ErrorCode::DimensionOverflow: return "DimensionOverflow";
    case ErrorCode::CapUnsatisfiable: return "CapUnsatisfiable";
    case ErrorCode::HighwayOverlap: return "HighwayOverlap";
    case ErrorCode::DegenerateLink: return "DegenerateLink";
    case ErrorCode::PlacementExhausted: return "PlacementExhausted";
    case ErrorCode::NoHighways: return "NoHighways";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::EmptySupport: return "EmptySupport";
    case ErrorCode::Format: return "Format";
  }
  return "Unknown";
}

}  // namespace uls
