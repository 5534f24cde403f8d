#include <doctest.h>

#include <sstream>

#include "uls/curve_io.hpp"
#include "uls/error.hpp"
#include "uls/fitting.hpp"

using namespace uls;
using namespace uls::mc;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

ErrorCode read_error(const std::string& text) {
  std::istringstream in(text);
  try {
    read_curve_csv(in);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("CSV layout") {
  PlosCurve c;
  c.add(10, true);
  c.add(10, false);
  c.add(10, true);
  c.config_hash = 0xabcdef;
  c.seed = 9;
  c.finalize();
  const auto lines = lines_of(curve_to_csv(c));
  REQUIRE(lines.size() == 93);
  CHECK(lines[0].rfind("# uls ", 0) == 0);
  CHECK(lines[0].find("config_hash=0000000000abcdef") != std::string::npos);
  CHECK(lines[0].find("seed=9") != std::string::npos);
  CHECK(lines[1] == "theta_deg,plos,los_sum,los_count");
  CHECK(lines[2] == "0,,0,0");
  CHECK(lines[12] == "10,0.666667,2,3");
  CHECK(lines[92] == "90,,0,0");
}

TEST_CASE("closed-form curves leave sums and counts blank") {
  const auto curve = fit::model_curve(fit::Sig2Params{});
  const auto lines = lines_of(curve_to_csv(curve));
  CHECK(lines[2] == "0,0.5,,");
  std::istringstream in(curve_to_csv(curve));
  const auto back = read_curve_csv(in);
  CHECK_FALSE(back.has_counts);
  for (int t = 0; t < kAngleBins; ++t) CHECK(*back.plos[t] == 0.5);
}

TEST_CASE("round trip keeps counts exactly") {
  PlosCurve c;
  for (int t = 0; t < kAngleBins; t += 3) {
    for (int k = 0; k < t + 1; ++k) c.add(t, (k * 7 + t) % 3 != 0);
  }
  c.finalize();
  std::istringstream in(curve_to_csv(c));
  const auto back = read_curve_csv(in);
  CHECK(back.has_counts);
  CHECK(back.los_sum == c.los_sum);
  CHECK(back.los_count == c.los_count);
  for (int t = 0; t < kAngleBins; ++t) {
    CHECK(back.plos[t].has_value() == c.plos[t].has_value());
    if (c.plos[t]) CHECK(*back.plos[t] == doctest::Approx(*c.plos[t]).epsilon(1e-5));
  }
}

TEST_CASE("malformed input") {
  try {
    std::istringstream in("theta,p\n0,1\n");
    read_curve_csv(in);
    FAIL("expected a format error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Format);
    CHECK(std::string(e.what()).find("expected header 'theta_deg,plos,los_sum,los_count'") !=
          std::string::npos);
  }
  CHECK(read_error("") == ErrorCode::Format);
  CHECK(read_error("theta_deg,plos,los_sum,los_count\n0,1,1,1\n") == ErrorCode::Format);
  std::string rows = "theta_deg,plos,los_sum,los_count\n";
  for (int t = 0; t < 91; ++t) rows += std::to_string(t) + ",1.5,,\n";
  CHECK(read_error(rows) == ErrorCode::Format);
  rows = "theta_deg,plos,los_sum,los_count\n";
  for (int t = 0; t < 91; ++t) rows += std::to_string(t == 5 ? 6 : t) + ",0.5,,\n";
  CHECK(read_error(rows) == ErrorCode::Format);
}
