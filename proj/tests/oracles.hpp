#pragma once

// Independent reference computations used only by tests. Nothing here calls
// into the slab-clipping code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "uls/citygen.hpp"
#include "uls/los.hpp"

namespace uls::oracle {

// LoS by sampling `samples` evenly spaced points (endpoints included) along
// the link. A point blocks when it lies strictly inside a footprint and the
// line height there is within the tie tolerance of, or below, the roof.
inline bool dense_sampling_los(const citygen::CityModel& city,
                               const los::Point3D& abs, const los::Point3D& ue,
                               int samples = 1000) {
  for (int k = 0; k < samples; ++k) {
    const double t = static_cast<double>(k) / (samples - 1);
    const double x = abs.x + t * (ue.x - abs.x);
    const double y = abs.y + t * (ue.y - abs.y);
    const double z = abs.z + t * (ue.z - abs.z);
    for (const auto& b : city.buildings) {
      if (b.x < x && x < b.x + b.width && b.y < y && y < b.y + b.length &&
          z <= b.height + los::kTieTolerance) {
        return false;
      }
    }
  }
  return true;
}

// Smallest |line height - roof| over sampled points inside footprints; used
// to recognise tie cases.
inline double min_roof_gap(const citygen::CityModel& city,
                           const los::Point3D& abs, const los::Point3D& ue,
                           int samples = 1000) {
  double gap = INFINITY;
  for (int k = 0; k < samples; ++k) {
    const double t = static_cast<double>(k) / (samples - 1);
    const double x = abs.x + t * (ue.x - abs.x);
    const double y = abs.y + t * (ue.y - abs.y);
    const double z = abs.z + t * (ue.z - abs.z);
    for (const auto& b : city.buildings) {
      if (b.x <= x && x <= b.x + b.width && b.y <= y && y <= b.y + b.length) {
        gap = std::min(gap, std::abs(z - b.height));
      }
    }
  }
  return gap;
}

// Paints every footprint onto a raster of `res` x `res` pixel centres and
// returns the number of pixels painted more than once.
inline std::size_t double_painted_pixels(const citygen::CityModel& city,
                                         int res = 2000) {
  std::vector<unsigned char> paint(static_cast<std::size_t>(res) * res, 0);
  const double px = citygen::kCitySide / res;
  std::size_t doubled = 0;
  for (const auto& b : city.buildings) {
    const int x0 = std::max(0, static_cast<int>(std::floor(b.x / px)));
    const int x1 = std::min(res - 1, static_cast<int>(std::ceil((b.x + b.width) / px)));
    const int y0 = std::max(0, static_cast<int>(std::floor(b.y / px)));
    const int y1 = std::min(res - 1, static_cast<int>(std::ceil((b.y + b.length) / px)));
    for (int j = y0; j <= y1; ++j) {
      const double cy = (j + 0.5) * px;
      if (!(b.y < cy && cy < b.y + b.length)) continue;
      for (int i = x0; i <= x1; ++i) {
        const double cx = (i + 0.5) * px;
        if (!(b.x < cx && cx < b.x + b.width)) continue;
        auto& cell = paint[static_cast<std::size_t>(j) * res + i];
        if (cell) ++doubled;
        cell = 1;
      }
    }
  }
  return doubled;
}

inline double rect_overlap_area(const citygen::Building& a,
                                const citygen::Building& b) {
  const double ox = std::min(a.x + a.width, b.x + b.width) - std::max(a.x, b.x);
  const double oy = std::min(a.y + a.length, b.y + b.length) - std::max(a.y, b.y);
  return ox > 0 && oy > 0 ? ox * oy : 0.0;
}

// Composite Simpson rule on [a, b] with n (even) intervals.
inline double simpson(const std::function<double(double)>& f, double a,
                      double b, int n = 2000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace uls::oracle
