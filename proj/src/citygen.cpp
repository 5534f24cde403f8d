#include "uls/citygen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "uls/error.hpp"

namespace uls::citygen {
namespace {

[[noreturn]] void invalid(const std::string& message) {
  throw Error(ErrorCode::InvalidArgument, message);
}

struct ShapeDims {
  double width;
  double length;
  Shape shape;
};

// RU/RH rectangles are 1.5 sqrt(A) wide.
ShapeDims random_urban_dims(double area, Rng& rng,
                            const GeneratorOptions& options) {
  const double side = std::sqrt(area);
  if (rng.bernoulli(options.square_fraction)) {
    return {side, side, Shape::Square};
  }
  const double width = 1.5 * side;
  return {width, area / width, Shape::Rectangle};
}

void place_random_buildings(std::span<const double> areas, OccupancyGrid& grid,
                            Rng& rng, const GeneratorOptions& options,
                            CityModel& city) {
  const int res = grid.resolution();
  const double cell = grid.cell_size();
  double placed_area = 0.0;
  std::vector<std::pair<int, int>> free_anchors;

  for (std::size_t i = 0; i < areas.size(); ++i) {
    const ShapeDims dims = random_urban_dims(areas[i], rng, options);
    const double height = sample_height(city.params.gamma, rng);
    const int span_x = static_cast<int>(std::ceil(dims.width / cell));
    const int span_y = static_cast<int>(std::ceil(dims.length / cell));

    std::optional<std::pair<int, int>> anchor;
    if (span_x <= res && span_y <= res) {
      const auto nx = static_cast<std::uint64_t>(res - span_x + 1);
      const auto ny = static_cast<std::uint64_t>(res - span_y + 1);
      for (int attempt = 0; attempt < options.placement_attempts; ++attempt) {
        const int cx = static_cast<int>(rng.below(nx));
        const int cy = static_cast<int>(rng.below(ny));
        if (grid.block_free(cx, cy, span_x, span_y)) {
          anchor.emplace(cx, cy);
          break;
        }
      }
      if (!anchor) {
        free_anchors.clear();
        for (int cy = 0; cy + span_y <= res; ++cy) {
          for (int cx = 0; cx + span_x <= res; ++cx) {
            if (grid.block_free(cx, cy, span_x, span_y)) {
              free_anchors.emplace_back(cx, cy);
            }
          }
        }
        if (!free_anchors.empty()) {
          anchor = free_anchors[rng.below(free_anchors.size())];
        }
      }
    }

    if (!anchor) {
      std::ostringstream msg;
      msg << "no free " << span_x << "x" << span_y
          << " cell block for building of area " << areas[i] << " m^2";
      city.warnings.push_back(
          {GenerationWarning::Category::Dropped, i, msg.str()});
      continue;
    }
    grid.mark_block(anchor->first, anchor->second, span_x, span_y);
    city.buildings.push_back({anchor->first * cell, anchor->second * cell,
                              dims.width, dims.length, height, dims.shape});
    placed_area += dims.width * dims.length;
  }
  city.achieved_alpha = placed_area / kCityArea;
}

}  // namespace

void BuiltUpParams::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) invalid("alpha must be in (0,1]");
  if (beta < 1) invalid("beta must be a positive integer");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) invalid("gamma must be > 0");
}

BuiltUpParams preset(Environment env) {
  switch (env) {
    case Environment::Suburban: return {0.1, 750, 8.0};
    case Environment::Urban: return {0.3, 500, 15.0};
    case Environment::DenseUrban: return {0.5, 300, 20.0};
    case Environment::HighRise: return {0.5, 300, 50.0};
  }
  return {};
}

std::string_view to_string(Environment env) {
  switch (env) {
    case Environment::Suburban: return "suburban";
    case Environment::Urban: return "urban";
    case Environment::DenseUrban: return "dense-urban";
    case Environment::HighRise: return "high-rise";
  }
  return "";
}

std::optional<Environment> parse_environment(std::string_view name) {
  for (auto env : {Environment::Suburban, Environment::Urban,
                   Environment::DenseUrban, Environment::HighRise}) {
    if (to_string(env) == name) return env;
  }
  return std::nullopt;
}

std::string_view to_string(Layout layout) {
  switch (layout) {
    case Layout::Manhattan: return "manhattan";
    case Layout::RandomManhattan: return "rm";
    case Layout::RandomUrban: return "ru";
    case Layout::RandomHighway: return "rh";
  }
  return "";
}

std::optional<Layout> parse_layout(std::string_view name) {
  for (auto layout : {Layout::Manhattan, Layout::RandomManhattan,
                      Layout::RandomUrban, Layout::RandomHighway}) {
    if (to_string(layout) == name) return layout;
  }
  return std::nullopt;
}

std::string_view to_string(GenerationWarning::Category category) {
  return category == GenerationWarning::Category::Dropped ? "dropped"
                                                          : "clamped";
}

Highway::Rect Highway::rect() const {
  const double start = (kCitySide - length) / 2.0;
  if (axis == Axis::Horizontal) {
    return {start, offset, start + length, offset + width};
  }
  return {offset, start, offset + width, start + length};
}

std::vector<Highway> default_highways(int count, double width, double length) {
  std::vector<Highway> out;
  for (int k = 0; k < count; ++k) {
    const double center = (k + 1) * kCitySide / (count + 1);
    out.push_back({Axis::Horizontal, center - width / 2.0, width, length});
  }
  return out;
}

void validate_highways(std::span<const Highway> highways) {
  for (std::size_t i = 0; i < highways.size(); ++i) {
    const Highway& hw = highways[i];
    if (!(hw.width > 0.0) || !(hw.length > 0.0) || hw.length > kCitySide) {
      invalid("highway " + std::to_string(i) +
              ": width and length must be positive and length <= 1000");
    }
    if (hw.offset < 0.0 || hw.offset + hw.width > kCitySide) {
      invalid("highway " + std::to_string(i) + ": strip leaves the city");
    }
  }
  for (std::size_t i = 0; i < highways.size(); ++i) {
    for (std::size_t j = i + 1; j < highways.size(); ++j) {
      const auto a = highways[i].rect();
      const auto b = highways[j].rect();
      const double ox = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
      const double oy = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
      if (ox > 0.0 && oy > 0.0) {
        throw Error(ErrorCode::HighwayOverlap,
                    "highways " + std::to_string(i) + " and " +
                        std::to_string(j) + " intersect");
      }
    }
  }
}

OccupancyGrid::OccupancyGrid(int resolution)
    : resolution_(resolution),
      cells_(static_cast<std::size_t>(resolution) * resolution, 0) {
  if (resolution < 1) invalid("grid resolution must be >= 1");
}

bool OccupancyGrid::block_free(int cx, int cy, int span_x, int span_y) const {
  if (cx < 0 || cy < 0 || cx + span_x > resolution_ ||
      cy + span_y > resolution_) {
    return false;
  }
  for (int y = cy; y < cy + span_y; ++y) {
    for (int x = cx; x < cx + span_x; ++x) {
      if (occupied(x, y)) return false;
    }
  }
  return true;
}

void OccupancyGrid::mark_block(int cx, int cy, int span_x, int span_y) {
  for (int y = cy; y < cy + span_y; ++y) {
    for (int x = cx; x < cx + span_x; ++x) {
      cells_[static_cast<std::size_t>(y) * resolution_ + x] = 1;
    }
  }
}

void OccupancyGrid::mark_rect(const Highway::Rect& r) {
  const double cell = cell_size();
  for (int y = 0; y < resolution_; ++y) {
    if (!((y + 1) * cell > r.y0 && y * cell < r.y1)) continue;
    for (int x = 0; x < resolution_; ++x) {
      if ((x + 1) * cell > r.x0 && x * cell < r.x1) {
        cells_[static_cast<std::size_t>(y) * resolution_ + x] = 1;
      }
    }
  }
}

std::size_t OccupancyGrid::occupied_count() const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), 1));
}

ManhattanGridSpec width_and_street(const BuiltUpParams& params) {
  params.validate();
  const double width = kCitySide * std::sqrt(params.alpha / params.beta);
  const double street = kCitySide / std::sqrt(static_cast<double>(params.beta)) - width;
  if (!(street > 0.0)) {
    throw Error(ErrorCode::NonPositiveStreet,
                "street width is not positive for alpha=" +
                    std::to_string(params.alpha));
  }
  // 1000/(W+S) = sqrt(beta); the epsilon absorbs rounding at perfect squares.
  const int blocks =
      static_cast<int>(std::floor(kCitySide / (width + street) + 1e-9));
  return {width, street, blocks};
}

double rayleigh_from_uniform(double gamma, double u) {
  return gamma * std::sqrt(-2.0 * std::log1p(-u));
}

double sample_height(double gamma, Rng& rng) {
  return rayleigh_from_uniform(gamma, rng.uniform());
}

double rayleigh_cdf(double gamma, double h) {
  if (h <= 0.0) return 0.0;
  return -std::expm1(-h * h / (2.0 * gamma * gamma));
}

double CityModel::covered_area() const {
  double total = 0.0;
  for (const auto& b : buildings) total += b.area();
  return total;
}

double CityModel::max_height() const {
  double h = 0.0;
  for (const auto& b : buildings) h = std::max(h, b.height);
  return h;
}

CityModel generate_manhattan(const BuiltUpParams& params, Rng& rng) {
  const ManhattanGridSpec spec = width_and_street(params);
  const double pitch = spec.width + spec.street;
  const double margin = (kCitySide - spec.blocks_per_side * pitch) / 2.0;

  CityModel city;
  city.layout = Layout::Manhattan;
  city.params = params;
  city.buildings.reserve(static_cast<std::size_t>(spec.blocks_per_side) *
                         spec.blocks_per_side);
  for (int iy = 0; iy < spec.blocks_per_side; ++iy) {
    for (int ix = 0; ix < spec.blocks_per_side; ++ix) {
      const double x = margin + ix * pitch + spec.street / 2.0;
      const double y = margin + iy * pitch + spec.street / 2.0;
      city.buildings.push_back({x, y, spec.width, spec.width,
                                sample_height(params.gamma, rng),
                                Shape::Square});
    }
  }
  city.achieved_alpha = city.covered_area() / kCityArea;
  return city;
}

CityModel generate_rm(const BuiltUpParams& params, Rng& rng,
                      const GeneratorOptions& options) {
  params.validate();
  const double building_area = params.alpha * kCityArea;
  const double mean_area = building_area / params.beta;
  const int nx = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(params.beta))));
  const int ny = static_cast<int>(std::ceil(static_cast<double>(params.beta) / nx));
  const double block_w = kCitySide / nx;
  const double block_l = kCitySide / ny;
  const double max_w = options.block_fill_limit * block_w;
  const double max_l = options.block_fill_limit * block_l;

  // beta of the nx*ny blocks are occupied; which ones is a random subset.
  std::vector<int> blocks(static_cast<std::size_t>(nx) * ny);
  std::iota(blocks.begin(), blocks.end(), 0);
  for (std::size_t i = 0; i < static_cast<std::size_t>(params.beta); ++i) {
    std::swap(blocks[i], blocks[i + rng.below(blocks.size() - i)]);
  }
  blocks.resize(static_cast<std::size_t>(params.beta));
  std::sort(blocks.begin(), blocks.end());

  CityModel city;
  city.layout = Layout::RandomManhattan;
  city.params = params;
  city.buildings.reserve(blocks.size());
  for (const int block : blocks) {
    const int ix = block % nx;
    const int iy = block / nx;
    const double area = mean_area * (0.6 + 0.8 * rng.uniform());
    double w = std::sqrt(area);
    double l = w;
    Shape shape = Shape::Square;
    if (!rng.bernoulli(options.square_fraction)) {
      shape = Shape::Rectangle;
      w = std::sqrt(area) * (0.5 + rng.uniform());
      l = area / w;
    }

    const double requested_w = w;
    const double requested_l = l;
    if (w > max_w) {
      w = max_w;
      l = area / w;
    }
    if (l > max_l) {
      l = max_l;
      w = std::min(area / l, max_w);
    }
    const std::size_t index = city.buildings.size();
    if (w != requested_w || l != requested_l) {
      std::ostringstream msg;
      msg << "footprint " << requested_w << "x" << requested_l
          << " clamped to " << w << "x" << l << " in block (" << ix << ","
          << iy << ")";
      city.warnings.push_back(
          {GenerationWarning::Category::Clamped, index, msg.str()});
    }
    if (w > block_w || l > block_l) {
      throw Error(ErrorCode::DimensionOverflow,
                  "building " + std::to_string(index) +
                      " does not fit its block after clamping");
    }
    const double x = ix * block_w + (block_w - w) / 2.0;
    const double y = iy * block_l + (block_l - l) / 2.0;
    city.buildings.push_back(
        {x, y, w, l, sample_height(params.gamma, rng), shape});
  }
  city.achieved_alpha = city.covered_area() / kCityArea;
  return city;
}

std::vector<double> sample_dirichlet_areas(int beta, double total,
                                           std::optional<double> cap, Rng& rng,
                                           int attempts) {
  if (beta < 1) invalid("beta must be >= 1");
  if (!(total > 0.0)) invalid("total area must be > 0");
  const auto n = static_cast<std::size_t>(beta);
  if (cap && *cap * beta < total) {
    throw Error(ErrorCode::CapUnsatisfiable,
                "cannot split the built area into " + std::to_string(beta) +
                    " buildings under the per-building cap");
  }

  std::vector<double> areas(n);
  for (int attempt = 0; attempt < std::max(attempts, 1); ++attempt) {
    double sum = 0.0;
    for (auto& a : areas) {
      a = rng.exponential();
      sum += a;
    }
    for (auto& a : areas) a = a / sum * total;
    if (!cap || *std::max_element(areas.begin(), areas.end()) <= *cap) {
      return areas;
    }
  }
  throw Error(ErrorCode::CapUnsatisfiable,
              "per-building area cap not met within " +
                  std::to_string(attempts) + " attempts");
}

namespace {

CityModel generate_random_urban(Layout layout, const BuiltUpParams& params,
                                std::span<const Highway> highways, Rng& rng,
                                const GeneratorOptions& options) {
  params.validate();
  const double building_area = params.alpha * kCityArea;
  std::optional<double> cap;
  if (options.enforce_area_cap) {
    cap = options.area_cap_fraction *
          (options.cap_referent == CapReferent::TotalArea ? kCityArea
                                                          : building_area);
  }

  CityModel city;
  city.layout = layout;
  city.params = params;
  city.highways.assign(highways.begin(), highways.end());
  city.sampled_areas = sample_dirichlet_areas(params.beta, building_area, cap,
                                              rng, options.cap_attempts);

  OccupancyGrid grid(options.grid_resolution);
  for (const auto& hw : highways) grid.mark_rect(hw.rect());
  place_random_buildings(city.sampled_areas, grid, rng, options, city);
  city.grid = std::move(grid);
  return city;
}

}  // namespace

CityModel generate_ru(const BuiltUpParams& params, Rng& rng,
                      const GeneratorOptions& options) {
  return generate_random_urban(Layout::RandomUrban, params, {}, rng, options);
}

CityModel generate_rh(const BuiltUpParams& params,
                      std::span<const Highway> highways, Rng& rng,
                      const GeneratorOptions& options) {
  validate_highways(highways);
  return generate_random_urban(Layout::RandomHighway, params, highways, rng,
                               options);
}

CityModel generate_city(const CityRequest& request, std::uint64_t master,
                        std::uint64_t index) {
  Rng rng(derive_seed(master, index, kGenerationStream));
  CityModel city;
  switch (request.layout) {
    case Layout::Manhattan:
      city = generate_manhattan(request.params, rng);
      break;
    case Layout::RandomManhattan:
      city = generate_rm(request.params, rng, request.options);
      break;
    case Layout::RandomUrban:
      city = generate_ru(request.params, rng, request.options);
      break;
    case Layout::RandomHighway:
      city = generate_rh(request.params, request.highways, rng, request.options);
      break;
  }
  city.seed = master;
  city.city_index = index;
  return city;
}

}  // namespace uls::citygen
