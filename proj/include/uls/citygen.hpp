#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uls/rng.hpp"

namespace uls::citygen {

inline constexpr double kCitySide = 1000.0;
inline constexpr double kCityArea = kCitySide * kCitySide;

// ITU built-up triple: built area fraction, buildings per km^2, Rayleigh
// scale of building heights in meters.
struct BuiltUpParams {
  double alpha = 0.3;
  int beta = 500;
  double gamma = 15.0;

  // Throws ErrorCode::InvalidArgument naming the offending field.
  void validate() const;
  friend bool operator==(const BuiltUpParams&, const BuiltUpParams&) = default;
};

enum class Environment { Suburban, Urban, DenseUrban, HighRise };

BuiltUpParams preset(Environment env);
std::string_view to_string(Environment env);
std::optional<Environment> parse_environment(std::string_view name);

enum class Layout { Manhattan, RandomManhattan, RandomUrban, RandomHighway };

std::string_view to_string(Layout layout);
std::optional<Layout> parse_layout(std::string_view name);

enum class Shape { Square, Rectangle };

// Axis-aligned prism; (x, y) is the lower-left footprint corner.
struct Building {
  double x = 0.0;
  double y = 0.0;
  double width = 0.0;   // along x
  double length = 0.0;  // along y
  double height = 0.0;
  Shape shape = Shape::Square;

  double area() const { return width * length; }
  friend bool operator==(const Building&, const Building&) = default;
};

enum class Axis { Horizontal, Vertical };

// A building-free strip. Horizontal strips span y in [offset, offset+width]
// and are centered along x; vertical strips are the transpose.
struct Highway {
  Axis axis = Axis::Horizontal;
  double offset = 0.0;
  double width = 50.0;
  double length = kCitySide;

  struct Rect {
    double x0, y0, x1, y1;
  };
  Rect rect() const;
  double area() const { return width * length; }
  friend bool operator==(const Highway&, const Highway&) = default;
};

// Evenly spaced horizontal strips, `count` of them.
std::vector<Highway> default_highways(int count = 3, double width = 50.0,
                                      double length = kCitySide);
// Throws HighwayOverlap for intersecting strips, InvalidArgument for strips
// leaving the city square.
void validate_highways(std::span<const Highway> highways);

class OccupancyGrid {
 public:
  explicit OccupancyGrid(int resolution = 50);

  int resolution() const { return resolution_; }
  double cell_size() const { return kCitySide / resolution_; }

  bool occupied(int cx, int cy) const {
    return cells_[static_cast<std::size_t>(cy) * resolution_ + cx] != 0;
  }
  // True iff every cell of the span_x by span_y block anchored at (cx, cy)
  // is inside the grid and free.
  bool block_free(int cx, int cy, int span_x, int span_y) const;
  void mark_block(int cx, int cy, int span_x, int span_y);
  // Marks every cell whose interior overlaps the rectangle.
  void mark_rect(const Highway::Rect& r);
  std::size_t occupied_count() const;

 private:
  int resolution_;
  std::vector<unsigned char> cells_;
};

struct ManhattanGridSpec {
  double width = 0.0;   // W
  double street = 0.0;  // S
  int blocks_per_side = 0;
};

// W = 1000*sqrt(alpha/beta), S = 1000/sqrt(beta) - W. Throws
// NonPositiveStreet when S <= 0.
ManhattanGridSpec width_and_street(const BuiltUpParams& params);

// Rayleigh(gamma) by inversion of u in [0, 1).
double rayleigh_from_uniform(double gamma, double u);
double sample_height(double gamma, Rng& rng);
double rayleigh_cdf(double gamma, double h);

enum class CapReferent {
  TotalArea,     // cap = fraction * A_total
  BuildingArea,  // cap = fraction * alpha * A_total
};

struct GeneratorOptions {
  // Probability that a random building is square rather than rectangular.
  double square_fraction = 0.5;
  int grid_resolution = 50;
  bool enforce_area_cap = true;
  double area_cap_fraction = 0.03;
  CapReferent cap_referent = CapReferent::TotalArea;
  int cap_attempts = 1000;
  int placement_attempts = 1000;
  // RM footprints are clamped to this fraction of their block.
  double block_fill_limit = 0.95;
};

struct GenerationWarning {
  enum class Category { Dropped, Clamped };
  Category category;
  std::size_t building;
  std::string message;
};

std::string_view to_string(GenerationWarning::Category category);

struct CityModel {
  double side = kCitySide;
  Layout layout = Layout::RandomUrban;
  BuiltUpParams params;
  std::uint64_t seed = 0;
  std::uint64_t city_index = 0;
  std::vector<Building> buildings;
  std::vector<Highway> highways;
  // Sum of placed footprint areas over the city area.
  double achieved_alpha = 0.0;
  // RU/RH only: the Dirichlet area vector before placement.
  std::vector<double> sampled_areas;
  std::vector<GenerationWarning> warnings;
  // RU/RH only: occupancy after placement.
  std::optional<OccupancyGrid> grid;

  double covered_area() const;
  double max_height() const;
};

CityModel generate_manhattan(const BuiltUpParams& params, Rng& rng);
CityModel generate_rm(const BuiltUpParams& params, Rng& rng,
                      const GeneratorOptions& options = {});

// Dirichlet(1_beta) scaled to `total`, resampled until every component is at
// most `cap` (no cap when cap is nullopt). Throws CapUnsatisfiable when the
// attempt budget runs out.
std::vector<double> sample_dirichlet_areas(int beta, double total,
                                           std::optional<double> cap, Rng& rng,
                                           int attempts = 1000);

CityModel generate_ru(const BuiltUpParams& params, Rng& rng,
                      const GeneratorOptions& options = {});
CityModel generate_rh(const BuiltUpParams& params,
                      std::span<const Highway> highways, Rng& rng,
                      const GeneratorOptions& options = {});

struct CityRequest {
  Layout layout = Layout::RandomUrban;
  BuiltUpParams params;
  std::vector<Highway> highways;  // RH only
  GeneratorOptions options;
};

// City `index` of the run seeded by `master`; stamps seed and index.
CityModel generate_city(const CityRequest& request, std::uint64_t master,
                        std::uint64_t index = 0);

}  // namespace uls::citygen
