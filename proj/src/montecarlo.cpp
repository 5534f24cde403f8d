#include "uls/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include <json.hpp>

#include "uls/error.hpp"

namespace uls::mc {

std::string_view to_string(Binning binning) {
  return binning == Binning::Nearest ? "nearest" : "ceiling";
}

std::optional<Binning> parse_binning(std::string_view name) {
  if (name == "nearest") return Binning::Nearest;
  if (name == "ceiling") return Binning::Ceiling;
  return std::nullopt;
}

int angle_bin(double theta_deg, Binning binning) {
  const double rounded = binning == Binning::Nearest
                             ? std::floor(theta_deg + 0.5)
                             : std::ceil(theta_deg);
  return static_cast<int>(std::clamp(rounded, 0.0, 90.0));
}

void SimulationConfig::validate() const {
  params.validate();
  auto invalid = [](const std::string& m) {
    throw Error(ErrorCode::InvalidArgument, m);
  };
  if (!(h_abs_max > 0.0) || !std::isfinite(h_abs_max)) {
    invalid("h_abs_max must be > 0");
  }
  if (n_ue < 1) invalid("n_ue must be >= 1");
  if (n_cities < 1) invalid("n_cities must be >= 1");
  if (abs_repeats < 1) invalid("abs_repeats must be >= 1");
  if (!(ue_height >= 0.0)) invalid("ue_height must be >= 0");
  if (min_count_per_bin < 0) invalid("min_count_per_bin must be >= 0");
  if (threads < 0) invalid("threads must be >= 0");
  if (generator.square_fraction < 0.0 || generator.square_fraction > 1.0) {
    invalid("square_fraction must be in [0,1]");
  }
  if (layout == citygen::Layout::RandomHighway) {
    citygen::validate_highways(highways);
  }
}

citygen::CityRequest SimulationConfig::city_request() const {
  citygen::CityRequest request;
  request.layout = layout;
  request.params = params;
  if (layout == citygen::Layout::RandomHighway) request.highways = highways;
  request.options = generator;
  return request;
}

std::string config_to_json(const SimulationConfig& c) {
  nlohmann::json doc;
  doc["params"] = {{"alpha", c.params.alpha},
                   {"beta", c.params.beta},
                   {"gamma", c.params.gamma}};
  doc["layout"] = std::string(citygen::to_string(c.layout));
  doc["h_abs_max"] = c.h_abs_max;
  doc["n_ue"] = c.n_ue;
  doc["n_cities"] = c.n_cities;
  doc["seed"] = c.seed;
  doc["ue_height"] = c.ue_height;
  doc["min_count_per_bin"] = c.min_count_per_bin;
  doc["abs_repeats"] = c.abs_repeats;
  doc["binning"] = std::string(to_string(c.binning));
  if (c.layout == citygen::Layout::RandomHighway) {
    nlohmann::json hws = nlohmann::json::array();
    for (const auto& hw : c.highways) {
      hws.push_back({{"axis", hw.axis == citygen::Axis::Horizontal
                                  ? "horizontal"
                                  : "vertical"},
                     {"offset", hw.offset},
                     {"width", hw.width},
                     {"length", hw.length}});
    }
    doc["highways"] = std::move(hws);
  }
  const auto& g = c.generator;
  doc["generator"] = {
      {"square_fraction", g.square_fraction},
      {"grid_resolution", g.grid_resolution},
      {"enforce_area_cap", g.enforce_area_cap},
      {"area_cap_fraction", g.area_cap_fraction},
      {"cap_referent", g.cap_referent == citygen::CapReferent::TotalArea
                           ? "total_area"
                           : "building_area"},
      {"cap_attempts", g.cap_attempts},
      {"placement_attempts", g.placement_attempts},
      {"block_fill_limit", g.block_fill_limit}};
  return doc.dump();
}

std::uint64_t config_hash(const SimulationConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : config_to_json(config)) {
    h = (h ^ ch) * 0x100000001b3ULL;
  }
  return h;
}

void PlosCurve::merge(const PlosCurve& other) {
  for (int t = 0; t < kAngleBins; ++t) {
    los_sum[t] += other.los_sum[t];
    los_count[t] += other.los_count[t];
  }
}

void PlosCurve::finalize() {
  for (int t = 0; t < kAngleBins; ++t) {
    plos[t] = los_count[t] > 0
                  ? std::optional<double>(los_sum[t] /
                                          static_cast<double>(los_count[t]))
                  : std::nullopt;
  }
}

std::uint64_t PlosCurve::total_count() const {
  std::uint64_t total = 0;
  for (const auto c : los_count) total += c;
  return total;
}

los::Point3D place_abs(const los::Scene& scene, double h_abs_max, Rng& rng) {
  for (int attempt = 0; attempt < kPlacementBudget; ++attempt) {
    const double x = rng.uniform(0.0, citygen::kCitySide);
    const double y = rng.uniform(0.0, citygen::kCitySide);
    const double z = rng.uniform() * h_abs_max;
    if (!scene.collides(x, y, z)) return {x, y, z};
  }
  throw Error(ErrorCode::PlacementExhausted,
              "no collision-free ABS position found");
}

std::vector<los::Point3D> place_ues(const los::Scene& scene, int n,
                                    double ue_height, Rng& rng) {
  std::vector<los::Point3D> out;
  out.reserve(static_cast<std::size_t>(std::max(n, 0)));
  for (int i = 0; i < n; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < kPlacementBudget; ++attempt) {
      const double x = rng.uniform(0.0, citygen::kCitySide);
      const double y = rng.uniform(0.0, citygen::kCitySide);
      if (!scene.on_footprint(x, y)) {
        out.push_back({x, y, ue_height});
        placed = true;
        break;
      }
    }
    if (!placed) {
      throw Error(ErrorCode::PlacementExhausted,
                  "no building-free UE position found");
    }
  }
  return out;
}

std::vector<los::Point3D> place_ues_highway(const citygen::CityModel& city,
                                            int n, Rng& rng) {
  if (city.highways.empty()) {
    throw Error(ErrorCode::NoHighways, "city has no highways");
  }
  std::vector<double> cumulative;
  double total = 0.0;
  for (const auto& hw : city.highways) {
    total += hw.area();
    cumulative.push_back(total);
  }
  std::vector<los::Point3D> out;
  out.reserve(static_cast<std::size_t>(std::max(n, 0)));
  for (int i = 0; i < n; ++i) {
    const double pick = rng.uniform() * total;
    const auto strip = static_cast<std::size_t>(
        std::upper_bound(cumulative.begin(), cumulative.end(), pick) -
        cumulative.begin());
    const auto r = city.highways[std::min(strip, cumulative.size() - 1)].rect();
    out.push_back({rng.uniform(r.x0, r.x1), rng.uniform(r.y0, r.y1), 0.0});
  }
  return out;
}

namespace {

struct CityOutcome {
  PlosCurve street;
  PlosCurve highway;
  CityReport report;
  std::exception_ptr error;
};

void accumulate(const los::Scene& scene, const los::Point3D& abs,
                std::span<const los::Point3D> ues, Binning binning,
                PlosCurve& curve) {
  for (const auto& ue : ues) {
    const int bin = angle_bin(los::elevation_angle_deg(abs, ue), binning);
    curve.add(bin, scene.is_los(abs, ue));
  }
}

CityOutcome process_city(const SimulationConfig& config, std::uint64_t index,
                         const citygen::CityModel* fixed_city, bool split) {
  CityOutcome out;
  std::optional<citygen::CityModel> generated;
  if (fixed_city == nullptr) {
    generated = citygen::generate_city(config.city_request(), config.seed,
                                       index);
  }
  const citygen::CityModel& city = fixed_city ? *fixed_city : *generated;
  out.report = {index, city.achieved_alpha, city.buildings.size(),
                city.warnings};

  const los::Scene scene(city);
  Rng rng(derive_seed(config.seed, index, kPlacementStream));
  for (int rep = 0; rep < config.abs_repeats; ++rep) {
    const los::Point3D abs = place_abs(scene, config.h_abs_max, rng);
    const auto ues = place_ues(scene, config.n_ue, config.ue_height, rng);
    accumulate(scene, abs, ues, config.binning, out.street);
    if (split) {
      const auto riders = place_ues_highway(city, config.n_ue, rng);
      accumulate(scene, abs, riders, config.binning, out.highway);
    }
  }
  return out;
}

std::vector<CityOutcome> run_cities(const SimulationConfig& config,
                                    const citygen::CityModel* fixed_city,
                                    bool split) {
  const auto n = static_cast<std::size_t>(config.n_cities);
  std::vector<CityOutcome> outcomes(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        outcomes[i] = process_city(config, i, fixed_city, split);
      } catch (...) {
        outcomes[i].error = std::current_exception();
      }
    }
  };

  std::size_t threads = config.threads > 0
                            ? static_cast<std::size_t>(config.threads)
                            : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, n);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (!outcomes[i].error) continue;
    try {
      std::rethrow_exception(outcomes[i].error);
    } catch (const Error& e) {
      throw Error(e.code(), "city " + std::to_string(i) + ": " + e.what());
    }
  }
  return outcomes;
}

void stamp(const SimulationConfig& config, PlosCurve& curve) {
  curve.config_hash = config_hash(config);
  curve.seed = config.seed;
  curve.finalize();
}

RunResult collect(const SimulationConfig& config,
                  std::vector<CityOutcome>& outcomes) {
  RunResult result;
  // Fixed reduction order: by city index.
  for (auto& o : outcomes) {
    result.curve.merge(o.street);
    result.cities.push_back(std::move(o.report));
  }
  stamp(config, result.curve);
  return result;
}

}  // namespace

RunResult run(const SimulationConfig& config) {
  config.validate();
  auto outcomes = run_cities(config, nullptr, false);
  return collect(config, outcomes);
}

RunResult run_on_city(const SimulationConfig& config,
                      const citygen::CityModel& city) {
  config.validate();
  auto outcomes = run_cities(config, &city, false);
  return collect(config, outcomes);
}

namespace {

SplitResult collect_split(const SimulationConfig& config,
                          std::vector<CityOutcome>& outcomes) {
  SplitResult result;
  for (auto& o : outcomes) {
    result.street.merge(o.street);
    result.highway.merge(o.highway);
    result.cities.push_back(std::move(o.report));
  }
  stamp(config, result.street);
  stamp(config, result.highway);
  return result;
}

}  // namespace

SplitResult run_rh_split(const SimulationConfig& config) {
  config.validate();
  if (config.layout != citygen::Layout::RandomHighway) {
    throw Error(ErrorCode::InvalidArgument,
                "highway split requires the rh layout");
  }
  if (config.highways.empty()) {
    throw Error(ErrorCode::NoHighways, "rh split requires at least one highway");
  }
  auto outcomes = run_cities(config, nullptr, true);
  return collect_split(config, outcomes);
}

SplitResult run_rh_split_on_city(const SimulationConfig& config,
                                 const citygen::CityModel& city) {
  config.validate();
  if (city.highways.empty()) {
    throw Error(ErrorCode::NoHighways, "city has no highways");
  }
  auto outcomes = run_cities(config, &city, true);
  return collect_split(config, outcomes);
}

}  // namespace uls::mc
