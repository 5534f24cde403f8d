#include "uls/curve_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "uls/error.hpp"
#include "uls/version.hpp"

namespace uls::mc {
namespace {

std::string format_g(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return buf;
}

[[noreturn]] void format_error(const std::string& message) {
  throw Error(ErrorCode::Format, "curve CSV: " + message);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double(const std::string& text, int row) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    format_error("row " + std::to_string(row) + ": bad number '" + text + "'");
  }
  return value;
}

}  // namespace

void write_curve_csv(const PlosCurve& curve, std::ostream& out) {
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(curve.config_hash));
  out << "# uls " << kVersion << " config_hash=" << hash
      << " seed=" << curve.seed << '\n';
  out << kCurveHeader << '\n';
  for (int t = 0; t < kAngleBins; ++t) {
    out << t << ',';
    if (curve.plos[t]) out << format_g(*curve.plos[t], 6);
    out << ',';
    if (curve.has_counts) {
      out << format_g(curve.los_sum[t], 15) << ',' << curve.los_count[t];
    } else {
      out << ',';
    }
    out << '\n';
  }
}

void write_curve_csv(const PlosCurve& curve,
                     const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Format, "cannot write " + path.string());
  write_curve_csv(curve, out);
}

std::string curve_to_csv(const PlosCurve& curve) {
  std::ostringstream out;
  write_curve_csv(curve, out);
  return out.str();
}

PlosCurve read_curve_csv(std::istream& in) {
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (line != kCurveHeader) {
      format_error(std::string("expected header '") + kCurveHeader + "'");
    }
    have_header = true;
    break;
  }
  if (!have_header) {
    format_error(std::string("expected header '") + kCurveHeader + "'");
  }

  PlosCurve curve;
  bool any_counts = false;
  bool any_blank_counts = false;
  int row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (row >= kAngleBins) format_error("more than 91 rows");
    const auto fields = split_fields(line);
    if (fields.size() != 4) {
      format_error("row " + std::to_string(row) + ": expected 4 fields");
    }
    if (parse_double(fields[0], row) != row) {
      format_error("row " + std::to_string(row) + ": theta out of order");
    }
    if (!fields[1].empty()) curve.plos[row] = parse_double(fields[1], row);
    if (fields[2].empty() && fields[3].empty()) {
      any_blank_counts = true;
    } else {
      any_counts = true;
      curve.los_sum[row] = parse_double(fields[2], row);
      const double count = parse_double(fields[3], row);
      if (count < 0 || count != static_cast<double>(static_cast<std::uint64_t>(count))) {
        format_error("row " + std::to_string(row) + ": bad count");
      }
      curve.los_count[row] = static_cast<std::uint64_t>(count);
    }
    if (curve.plos[row] && (*curve.plos[row] < 0.0 || *curve.plos[row] > 1.0)) {
      format_error("row " + std::to_string(row) + ": plos outside [0,1]");
    }
    ++row;
  }
  if (row != kAngleBins) format_error("expected 91 rows");
  if (any_counts && any_blank_counts) {
    format_error("los_sum/los_count must be present on all rows or none");
  }
  curve.has_counts = any_counts;
  return curve;
}

PlosCurve read_curve_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Format, "cannot read " + path.string());
  return read_curve_csv(in);
}

}  // namespace uls::mc
