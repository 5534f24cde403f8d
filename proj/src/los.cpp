#include "uls/los.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "uls/error.hpp"

namespace uls::los {

double obstruction_height(double h_abs, double h_ue, double r, double r_i) {
  if (!(r > 0.0)) {
    throw Error(ErrorCode::DegenerateLink,
                "obstruction height undefined for zero horizontal distance");
  }
  // h_abs - r_i (h_abs - h_ue) / r; lerp is exact at both endpoints.
  return std::lerp(h_abs, h_ue, r_i / r);
}

double horizontal_distance(const Point3D& a, const Point3D& b) {
  return std::hypot(b.x - a.x, b.y - a.y);
}

double elevation_angle_deg(const Point3D& abs, const Point3D& ue) {
  const double r = horizontal_distance(abs, ue);
  if (r == 0.0) return 90.0;
  const double rise = std::max(abs.z - ue.z, 0.0);
  return std::atan2(rise, r) * (180.0 / std::numbers::pi);
}

std::vector<PathObstruction> buildings_on_path(const citygen::CityModel& city,
                                               const Point3D& abs,
                                               const Point3D& ue) {
  std::vector<PathObstruction> out;
  const double r = horizontal_distance(abs, ue);
  if (r == 0.0) return out;

  constexpr double inf = std::numeric_limits<double>::infinity();
  const double dx = ue.x - abs.x;
  const double dy = ue.y - abs.y;
  // Open-segment slab clip; grazing contact yields an empty interval.
  auto clip = [inf](double lower, double upper, double origin, double d,
                    double& lo, double& hi) {
    if (d == 0.0) {
      const bool inside = lower < origin && origin < upper;
      lo = inside ? -inf : inf;
      hi = inside ? inf : -inf;
      return;
    }
    const double a = (lower - origin) / d;
    const double b = (upper - origin) / d;
    lo = std::min(a, b);
    hi = std::max(a, b);
  };

  for (std::size_t i = 0; i < city.buildings.size(); ++i) {
    const auto& b = city.buildings[i];
    double lo_x, hi_x, lo_y, hi_y;
    clip(b.x, b.x + b.width, abs.x, dx, lo_x, hi_x);
    clip(b.y, b.y + b.length, abs.y, dy, lo_y, hi_y);
    const double t0 = std::max({lo_x, lo_y, 0.0});
    const double t1 = std::min({hi_x, hi_y, 1.0});
    if (!(t0 < t1)) continue;
    const double r_entry = t0 * r;
    const double r_exit = t1 * r;
    out.push_back({i, r_entry, r_exit,
                   obstruction_height(abs.z, ue.z, r, r_entry),
                   obstruction_height(abs.z, ue.z, r, r_exit)});
  }
  return out;
}

Scene::Scene(const citygen::CityModel& city, const simd::KernelTable& kernels)
    : city_(&city), kernels_(kernels) {
  footprints_.reserve(city.buildings.size());
  for (const auto& b : city.buildings) {
    footprints_.push_back(b.x, b.y, b.x + b.width, b.y + b.length, b.height);
  }
  footprints_.finalize();
}

std::ptrdiff_t Scene::first_blocker(const Point3D& abs,
                                    const Point3D& ue) const {
  const double dx = ue.x - abs.x;
  const double dy = ue.y - abs.y;
  if (dx == 0.0 && dy == 0.0) return -1;
  const simd::Segment segment{abs.x, abs.y, abs.z, dx, dy, ue.z - abs.z};
  return kernels_.first_blocker(footprints_, segment, kTieTolerance);
}

bool Scene::is_los(const Point3D& abs, const Point3D& ue) const {
  return first_blocker(abs, ue) < 0;
}

bool Scene::collides(double x, double y, double z) const {
  return kernels_.first_container(footprints_, x, y, z) >= 0;
}

bool Scene::on_footprint(double x, double y) const {
  return collides(x, y, -std::numeric_limits<double>::infinity());
}

bool is_los(const citygen::CityModel& city, const Point3D& abs,
            const Point3D& ue) {
  return Scene(city).is_los(abs, ue);
}

}  // namespace uls::los
