#pragma once

#include <cstddef>
#include <vector>

#include "uls/citygen.hpp"
#include "uls/simd/kernels.hpp"

namespace uls::los {

struct Point3D {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

// One building crossed by the ground projection of a link. Distances are
// horizontal and measured from the ABS projection.
struct PathObstruction {
  std::size_t building = 0;
  double r_entry = 0.0;
  double r_exit = 0.0;
  double line_height_entry = 0.0;
  double line_height_exit = 0.0;
};

// Line heights within this distance of a rooftop count as blocked.
inline constexpr double kTieTolerance = 1e-9;

// Height of the ABS-UE line at horizontal distance r_i from the ABS:
// h_abs - r_i (h_abs - h_ue) / r. Throws DegenerateLink when r <= 0.
double obstruction_height(double h_abs, double h_ue, double r, double r_i);

double horizontal_distance(const Point3D& a, const Point3D& b);

// Elevation of the ABS seen from the UE, in [0, 90]; 90 when the ABS is
// directly overhead. A UE above the ABS reports 0.
double elevation_angle_deg(const Point3D& abs, const Point3D& ue);

std::vector<PathObstruction> buildings_on_path(const citygen::CityModel& city,
                                               const Point3D& abs,
                                               const Point3D& ue);

// Precomputed footprint arrays for repeated queries against one city. The
// city must outlive the scene.
class Scene {
 public:
  explicit Scene(const citygen::CityModel& city,
                 const simd::KernelTable& kernels = simd::default_kernels());

  bool is_los(const Point3D& abs, const Point3D& ue) const;
  // First building (by index) that blocks the link, or -1.
  std::ptrdiff_t first_blocker(const Point3D& abs, const Point3D& ue) const;
  // True iff some footprint contains (x, y) and z is below its roof.
  bool collides(double x, double y, double z) const;
  // True iff some footprint contains (x, y), regardless of height.
  bool on_footprint(double x, double y) const;

  const citygen::CityModel& city() const { return *city_; }
  simd::Isa isa() const { return kernels_.isa; }

 private:
  const citygen::CityModel* city_;
  simd::Footprints footprints_;
  simd::KernelTable kernels_;
};

bool is_los(const citygen::CityModel& city, const Point3D& abs,
            const Point3D& ue);

}  // namespace uls::los
