#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "uls/montecarlo.hpp"

namespace uls::mc {

inline constexpr const char* kCurveHeader = "theta_deg,plos,los_sum,los_count";

// One '#' provenance line, the header, then 91 rows (theta 0..90). plos is
// written with 6 significant digits and left empty for unpopulated bins;
// los_sum/los_count are empty for closed-form curves.
void write_curve_csv(const PlosCurve& curve, std::ostream& out);
void write_curve_csv(const PlosCurve& curve, const std::filesystem::path& path);
std::string curve_to_csv(const PlosCurve& curve);

// Skips leading '#' lines. Throws ErrorCode::Format with the expected header
// when the header or a row is malformed.
PlosCurve read_curve_csv(std::istream& in);
PlosCurve read_curve_csv(const std::filesystem::path& path);

}  // namespace uls::mc
