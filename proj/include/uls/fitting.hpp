#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "uls/montecarlo.hpp"

namespace uls::fit {

// P(theta) = 1 / (1 + a exp(-b (theta_deg - a))), theta in degrees.
struct Sig1Params {
  double a = 1.0;
  double b = 0.1;
};

// P(theta) = 1 / (1 + exp(x1 t^3 + x2 t^2 + x3 t + x4)), t in radians.
struct Sig2Params {
  double x1 = 0.0;
  double x2 = 0.0;
  double x3 = 0.0;
  double x4 = 0.0;
};

enum class Model { Sig1, Sig2 };

std::string_view to_string(Model model);
std::optional<Model> parse_model(std::string_view name);

double deg_to_rad(double deg);
double sig1_eval(const Sig1Params& p, double theta_deg);
double sig2_eval(const Sig2Params& p, double theta_rad);

struct FitResult {
  Model model = Model::Sig2;
  std::variant<Sig1Params, Sig2Params> params;
  double rmse = 0.0;
  // RMSE of the starting point handed to the nonlinear refinement.
  double initial_rmse = 0.0;
  std::vector<int> support;  // integer degrees used in the fit
  int iterations = 0;
  // False when the iteration budget ran out first.
  bool converged = true;

  // Model value at an angle in degrees.
  double eval_deg(double theta_deg) const;
};

struct FitOptions {
  int min_count = 30;
  int max_iterations = 500;
  double relative_tolerance = 1e-9;
};

// Angles (degrees) and probabilities of the fit-eligible bins: plos defined
// and, when the curve carries counts, count >= min_count.
struct Samples {
  std::vector<int> theta_deg;
  std::vector<double> plos;
};
Samples eligible_samples(const mc::PlosCurve& curve, int min_count);

// Both throw InsufficientData with fewer than 5 eligible bins.
FitResult fit_sig1(const mc::PlosCurve& curve, const FitOptions& options = {});
FitResult fit_sig2(const mc::PlosCurve& curve, const FitOptions& options = {});
FitResult fit_sig1(const Samples& samples, const FitOptions& options = {});
FitResult fit_sig2(const Samples& samples, const FitOptions& options = {});

struct Metrics {
  double rmse = 0.0;
  double mae = 0.0;
  // 1 - SSres/SStot about the reference mean; unclamped, -inf when the
  // reference is constant and the residuals are not all zero.
  double r2 = 1.0;
  std::size_t n = 0;
};

// Metrics over bins defined in both curves, further restricted to `support`
// (integer degrees) when it is non-empty. Throws EmptySupport.
Metrics compare(const mc::PlosCurve& model, const mc::PlosCurve& reference,
                std::span<const int> support = {});
Metrics compare(std::span<const double> model,
                std::span<const double> reference);

// Closed-form curve sampled at theta = 0..90 (no counts).
mc::PlosCurve model_curve(const Sig1Params& p);
mc::PlosCurve model_curve(const Sig2Params& p);
mc::PlosCurve model_curve(const FitResult& fit);

}  // namespace uls::fit
