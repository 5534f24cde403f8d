#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uls/citygen.hpp"
#include "uls/los.hpp"
#include "uls/rng.hpp"

namespace uls::mc {

inline constexpr int kAngleBins = 91;  // 0..90 degrees

enum class Binning { Nearest, Ceiling };

std::string_view to_string(Binning binning);
std::optional<Binning> parse_binning(std::string_view name);

// Integer-degree bin of an elevation angle, clamped to [0, 90]. Nearest
// rounds half up.
int angle_bin(double theta_deg, Binning binning);

struct SimulationConfig {
  citygen::BuiltUpParams params;
  citygen::Layout layout = citygen::Layout::RandomUrban;
  double h_abs_max = 500.0;
  int n_ue = 5000;
  int n_cities = 40;
  std::uint64_t seed = 1;
  std::vector<citygen::Highway> highways = citygen::default_highways();
  double ue_height = 0.0;
  int min_count_per_bin = 30;
  // ABS redraws per city; each redraw places a fresh set of UEs.
  int abs_repeats = 1;
  Binning binning = Binning::Nearest;
  citygen::GeneratorOptions generator;
  // 0 = hardware concurrency. Never affects results.
  int threads = 0;

  void validate() const;
  citygen::CityRequest city_request() const;
};

// Canonical JSON of every result-affecting field (threads excluded), and its
// FNV-1a hash.
std::string config_to_json(const SimulationConfig& config);
std::uint64_t config_hash(const SimulationConfig& config);

struct PlosCurve {
  std::array<double, kAngleBins> los_sum{};
  std::array<std::uint64_t, kAngleBins> los_count{};
  std::array<std::optional<double>, kAngleBins> plos{};
  // False for closed-form curves read back from CSV without sums/counts.
  bool has_counts = true;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;

  void add(int bin, bool los) {
    los_sum[bin] += los ? 1.0 : 0.0;
    ++los_count[bin];
  }
  void merge(const PlosCurve& other);
  // plos[t] = los_sum[t] / los_count[t] where the count is positive.
  void finalize();
  std::uint64_t total_count() const;
};

struct CityWarning {
  std::uint64_t city_index;
  citygen::GenerationWarning warning;
};

struct CityReport {
  std::uint64_t city_index = 0;
  double achieved_alpha = 0.0;
  std::size_t buildings = 0;
  std::vector<citygen::GenerationWarning> warnings;
};

struct RunResult {
  PlosCurve curve;
  std::vector<CityReport> cities;
};

struct SplitResult {
  PlosCurve street;
  PlosCurve highway;
  std::vector<CityReport> cities;
};

inline constexpr int kPlacementBudget = 100000;

// Uniform (x, y) and z = u * h_abs_max, redrawn while inside a prism.
los::Point3D place_abs(const los::Scene& scene, double h_abs_max, Rng& rng);
// Uniform over the city minus building footprints.
std::vector<los::Point3D> place_ues(const los::Scene& scene, int n,
                                    double ue_height, Rng& rng);
// Uniform over the union of highway strips, z = 0. Throws NoHighways.
std::vector<los::Point3D> place_ues_highway(const citygen::CityModel& city,
                                            int n, Rng& rng);

RunResult run(const SimulationConfig& config);
SplitResult run_rh_split(const SimulationConfig& config);

// Runs the placement and LoS stages over a fixed city for every city index
// instead of generating one per index.
RunResult run_on_city(const SimulationConfig& config,
                      const citygen::CityModel& city);
// Street/highway split over a fixed city; the city must carry highways.
SplitResult run_rh_split_on_city(const SimulationConfig& config,
                                 const citygen::CityModel& city);

}  // namespace uls::mc
