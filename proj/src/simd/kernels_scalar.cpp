#include <limits>

#include "uls/simd/kernels.hpp"

namespace uls::simd {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Sentinel boxes sit far outside the city and can never block or contain.
constexpr double kSentinel = 1e30;

// Operand order matches minpd/maxpd so results agree in signed-zero cases.
inline double vmin(double a, double b) { return a < b ? a : b; }
inline double vmax(double a, double b) { return a > b ? a : b; }

}  // namespace

void Footprints::reserve(std::size_t n) {
  const std::size_t padded = (n + kLaneWidth - 1) / kLaneWidth * kLaneWidth;
  for (auto* v : {&x0_, &y0_, &x1_, &y1_, &h_}) v->reserve(padded);
}

void Footprints::push_back(double x0, double y0, double x1, double y1,
                           double height) {
  // Drop any previous padding so push_back after finalize stays correct.
  x0_.resize(count_);
  y0_.resize(count_);
  x1_.resize(count_);
  y1_.resize(count_);
  h_.resize(count_);
  x0_.push_back(x0);
  y0_.push_back(y0);
  x1_.push_back(x1);
  y1_.push_back(y1);
  h_.push_back(height);
  ++count_;
}

void Footprints::finalize() {
  while (x0_.size() % kLaneWidth != 0) {
    x0_.push_back(kSentinel);
    y0_.push_back(kSentinel);
    x1_.push_back(kSentinel);
    y1_.push_back(kSentinel);
    h_.push_back(-kInf);
  }
}

std::ptrdiff_t first_blocker_scalar(const Footprints& fp, const Segment& s,
                                    double tie_eps) {
  const bool x_flat = s.dx == 0.0;
  const bool y_flat = s.dy == 0.0;
  const double inv_dx = 1.0 / s.dx;
  const double inv_dy = 1.0 / s.dy;
  for (std::size_t i = 0; i < fp.size(); ++i) {
    double lo_x, hi_x, lo_y, hi_y;
    if (x_flat) {
      const bool inside = fp.x0()[i] < s.ax && s.ax < fp.x1()[i];
      lo_x = inside ? -kInf : kInf;
      hi_x = inside ? kInf : -kInf;
    } else {
      const double a = (fp.x0()[i] - s.ax) * inv_dx;
      const double b = (fp.x1()[i] - s.ax) * inv_dx;
      lo_x = vmin(a, b);
      hi_x = vmax(a, b);
    }
    if (y_flat) {
      const bool inside = fp.y0()[i] < s.ay && s.ay < fp.y1()[i];
      lo_y = inside ? -kInf : kInf;
      hi_y = inside ? kInf : -kInf;
    } else {
      const double a = (fp.y0()[i] - s.ay) * inv_dy;
      const double b = (fp.y1()[i] - s.ay) * inv_dy;
      lo_y = vmin(a, b);
      hi_y = vmax(a, b);
    }
    const double t0 = vmax(vmax(lo_x, lo_y), 0.0);
    const double t1 = vmin(vmin(hi_x, hi_y), 1.0);
    if (t0 < t1) {
      const double z0 = s.az + t0 * s.dz;
      const double z1 = s.az + t1 * s.dz;
      if (vmin(z0, z1) <= fp.height()[i] + tie_eps) {
        return static_cast<std::ptrdiff_t>(i);
      }
    }
  }
  return -1;
}

std::ptrdiff_t first_container_scalar(const Footprints& fp, double x, double y,
                                      double z) {
  for (std::size_t i = 0; i < fp.size(); ++i) {
    if (fp.x0()[i] <= x && x <= fp.x1()[i] && fp.y0()[i] <= y &&
        y <= fp.y1()[i] && z < fp.height()[i]) {
      return static_cast<std::ptrdiff_t>(i);
    }
  }
  return -1;
}

}  // namespace uls::simd
