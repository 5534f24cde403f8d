#include "uls/fitting.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "uls/error.hpp"

namespace uls::fit {
namespace {

constexpr std::size_t kMinEligibleBins = 5;
constexpr double kLogitClamp = 1e-4;

void require_samples(const Samples& s) {
  if (s.theta_deg.size() < kMinEligibleBins) {
    throw Error(ErrorCode::InsufficientData,
                "need at least 5 eligible bins, have " +
                    std::to_string(s.theta_deg.size()));
  }
}

template <class F>
double rmse_of(const Samples& s, F&& model) {
  double sse = 0.0;
  for (std::size_t j = 0; j < s.plos.size(); ++j) {
    const double e = model(s.theta_deg[j]) - s.plos[j];
    sse += e * e;
  }
  return std::sqrt(sse / static_cast<double>(s.plos.size()));
}

double sig2_rmse(const Samples& s, const Eigen::Vector4d& x) {
  const Sig2Params p{x[0], x[1], x[2], x[3]};
  return rmse_of(s, [&](int deg) { return sig2_eval(p, deg_to_rad(deg)); });
}

double sig1_rmse(const Samples& s, double log_a, double log_b) {
  const Sig1Params p{std::exp(log_a), std::exp(log_b)};
  return rmse_of(s, [&](int deg) { return sig1_eval(p, deg); });
}

// Nelder-Mead over (log a, log b); standard coefficients.
struct Simplex {
  std::array<std::array<double, 2>, 3> v;
  std::array<double, 3> f;
};

}  // namespace

std::string_view to_string(Model model) {
  return model == Model::Sig1 ? "sig1" : "sig2";
}

std::optional<Model> parse_model(std::string_view name) {
  if (name == "sig1") return Model::Sig1;
  if (name == "sig2") return Model::Sig2;
  return std::nullopt;
}

double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

double sig1_eval(const Sig1Params& p, double theta_deg) {
  return 1.0 / (1.0 + p.a * std::exp(-p.b * (theta_deg - p.a)));
}

double sig2_eval(const Sig2Params& p, double t) {
  const double u = ((p.x1 * t + p.x2) * t + p.x3) * t + p.x4;
  return 1.0 / (1.0 + std::exp(u));
}

double FitResult::eval_deg(double theta_deg) const {
  if (const auto* p = std::get_if<Sig1Params>(&params)) {
    return sig1_eval(*p, theta_deg);
  }
  return sig2_eval(std::get<Sig2Params>(params), deg_to_rad(theta_deg));
}

Samples eligible_samples(const mc::PlosCurve& curve, int min_count) {
  Samples s;
  for (int t = 0; t < mc::kAngleBins; ++t) {
    if (!curve.plos[t]) continue;
    if (curve.has_counts &&
        curve.los_count[t] < static_cast<std::uint64_t>(std::max(min_count, 0))) {
      continue;
    }
    s.theta_deg.push_back(t);
    s.plos.push_back(*curve.plos[t]);
  }
  return s;
}

FitResult fit_sig2(const Samples& s, const FitOptions& options) {
  require_samples(s);
  const auto n = static_cast<Eigen::Index>(s.plos.size());

  // Logit linearization: ln((1-P)/P) is the cubic itself.
  Eigen::MatrixX4d basis(n, 4);
  Eigen::VectorXd target(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double t = deg_to_rad(s.theta_deg[j]);
    basis.row(j) << t * t * t, t * t, t, 1.0;
    const double p = std::clamp(s.plos[j], kLogitClamp, 1.0 - kLogitClamp);
    target[j] = std::log((1.0 - p) / p);
  }
  Eigen::Vector4d x = basis.colPivHouseholderQr().solve(target);

  FitResult result;
  result.model = Model::Sig2;
  result.support = s.theta_deg;
  double rmse = sig2_rmse(s, x);
  result.initial_rmse = rmse;

  // Levenberg-Marquardt on the untransformed residuals.
  double lambda = 1e-3;
  result.converged = false;
  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    if (rmse == 0.0) {
      result.converged = true;
      break;
    }
    Eigen::MatrixX4d jac(n, 4);
    Eigen::VectorXd resid(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double t = deg_to_rad(s.theta_deg[j]);
      const double f = sig2_eval({x[0], x[1], x[2], x[3]}, t);
      resid[j] = f - s.plos[j];
      const double slope = -f * (1.0 - f);
      jac.row(j) = slope * basis.row(j);
    }
    const Eigen::Matrix4d jtj = jac.transpose() * jac;
    const Eigen::Vector4d grad = jac.transpose() * resid;

    bool accepted = false;
    while (lambda < 1e16) {
      Eigen::Matrix4d damped = jtj;
      for (int k = 0; k < 4; ++k) {
        damped(k, k) += lambda * std::max(jtj(k, k), 1e-12);
      }
      const Eigen::Vector4d step = damped.ldlt().solve(-grad);
      const Eigen::Vector4d trial = x + step;
      const double trial_rmse = sig2_rmse(s, trial);
      if (std::isfinite(trial_rmse) && trial_rmse < rmse) {
        const double improvement = (rmse - trial_rmse) / rmse;
        x = trial;
        rmse = trial_rmse;
        lambda = std::max(lambda / 10.0, 1e-12);
        accepted = true;
        if (improvement < options.relative_tolerance) result.converged = true;
        break;
      }
      lambda *= 10.0;
    }
    if (!accepted) {
      // No descent direction left at any damping: a local minimum.
      result.converged = true;
    }
    if (result.converged) {
      ++iter;
      break;
    }
  }
  result.iterations = iter;
  result.params = Sig2Params{x[0], x[1], x[2], x[3]};
  result.rmse = rmse;
  return result;
}

FitResult fit_sig1(const Samples& s, const FitOptions& options) {
  require_samples(s);

  // Coarse logarithmic grid, a in [0.5, 50], b in [0.005, 0.5].
  constexpr int kGrid = 41;
  const double la0 = std::log(0.5), la1 = std::log(50.0);
  const double lb0 = std::log(0.005), lb1 = std::log(0.5);
  const double da = (la1 - la0) / (kGrid - 1);
  const double db = (lb1 - lb0) / (kGrid - 1);
  double best = std::numeric_limits<double>::infinity();
  std::array<double, 2> start{la0, lb0};
  for (int i = 0; i < kGrid; ++i) {
    for (int k = 0; k < kGrid; ++k) {
      const double la = la0 + i * da;
      const double lb = lb0 + k * db;
      const double e = sig1_rmse(s, la, lb);
      if (e < best) {
        best = e;
        start = {la, lb};
      }
    }
  }

  FitResult result;
  result.model = Model::Sig1;
  result.support = s.theta_deg;
  result.initial_rmse = best;

  auto objective = [&](const std::array<double, 2>& v) {
    const double e = sig1_rmse(s, v[0], v[1]);
    return std::isfinite(e) ? e : std::numeric_limits<double>::infinity();
  };
  Simplex sx;
  sx.v = {start, std::array<double, 2>{start[0] + da, start[1]},
          std::array<double, 2>{start[0], start[1] + db}};
  for (int i = 0; i < 3; ++i) sx.f[i] = objective(sx.v[i]);

  result.converged = false;
  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(),
              [&](int l, int r) { return sx.f[l] < sx.f[r]; });
    const auto lo = order[0], mid = order[1], hi = order[2];

    const double spread = sx.f[hi] - sx.f[lo];
    double size = 0.0;
    for (int i = 0; i < 3; ++i) {
      for (int d = 0; d < 2; ++d) {
        size = std::max(size, std::abs(sx.v[i][d] - sx.v[lo][d]));
      }
    }
    if (spread <= options.relative_tolerance * sx.f[lo] || size < 1e-12) {
      result.converged = true;
      break;
    }

    std::array<double, 2> centroid{};
    for (int d = 0; d < 2; ++d) {
      centroid[d] = (sx.v[lo][d] + sx.v[mid][d]) / 2.0;
    }
    auto along = [&](double coef) {
      std::array<double, 2> p{};
      for (int d = 0; d < 2; ++d) {
        p[d] = centroid[d] + coef * (sx.v[hi][d] - centroid[d]);
      }
      return p;
    };

    const auto reflected = along(-1.0);
    const double fr = objective(reflected);
    if (fr < sx.f[lo]) {
      const auto expanded = along(-2.0);
      const double fe = objective(expanded);
      if (fe < fr) {
        sx.v[hi] = expanded;
        sx.f[hi] = fe;
      } else {
        sx.v[hi] = reflected;
        sx.f[hi] = fr;
      }
      continue;
    }
    if (fr < sx.f[mid]) {
      sx.v[hi] = reflected;
      sx.f[hi] = fr;
      continue;
    }
    const auto contracted = fr < sx.f[hi] ? along(-0.5) : along(0.5);
    const double fc = objective(contracted);
    if (fc < std::min(fr, sx.f[hi])) {
      sx.v[hi] = contracted;
      sx.f[hi] = fc;
      continue;
    }
    for (const int i : {mid, hi}) {
      for (int d = 0; d < 2; ++d) {
        sx.v[i][d] = sx.v[lo][d] + 0.5 * (sx.v[i][d] - sx.v[lo][d]);
      }
      sx.f[i] = objective(sx.v[i]);
    }
  }

  const int best_vertex = static_cast<int>(
      std::min_element(sx.f.begin(), sx.f.end()) - sx.f.begin());
  result.iterations = iter;
  result.params =
      Sig1Params{std::exp(sx.v[best_vertex][0]), std::exp(sx.v[best_vertex][1])};
  result.rmse = sx.f[best_vertex];
  return result;
}

FitResult fit_sig2(const mc::PlosCurve& curve, const FitOptions& options) {
  return fit_sig2(eligible_samples(curve, options.min_count), options);
}

FitResult fit_sig1(const mc::PlosCurve& curve, const FitOptions& options) {
  return fit_sig1(eligible_samples(curve, options.min_count), options);
}

Metrics compare(std::span<const double> model,
                std::span<const double> reference) {
  if (model.empty() || model.size() != reference.size()) {
    throw Error(ErrorCode::EmptySupport, "no shared support between curves");
  }
  const auto n = static_cast<double>(model.size());
  double sse = 0.0, sae = 0.0, mean = 0.0;
  for (std::size_t i = 0; i < model.size(); ++i) {
    const double e = model[i] - reference[i];
    sse += e * e;
    sae += std::abs(e);
    mean += reference[i];
  }
  mean /= n;
  double sst = 0.0;
  for (const double r : reference) sst += (r - mean) * (r - mean);

  Metrics m;
  m.n = model.size();
  m.rmse = std::sqrt(sse / n);
  m.mae = sae / n;
  if (sst > 0.0) {
    m.r2 = 1.0 - sse / sst;
  } else {
    m.r2 = sse == 0.0 ? 1.0 : -std::numeric_limits<double>::infinity();
  }
  return m;
}

Metrics compare(const mc::PlosCurve& model, const mc::PlosCurve& reference,
                std::span<const int> support) {
  std::vector<double> a, b;
  for (int t = 0; t < mc::kAngleBins; ++t) {
    if (!model.plos[t] || !reference.plos[t]) continue;
    if (!support.empty() &&
        std::find(support.begin(), support.end(), t) == support.end()) {
      continue;
    }
    a.push_back(*model.plos[t]);
    b.push_back(*reference.plos[t]);
  }
  if (a.empty()) {
    throw Error(ErrorCode::EmptySupport, "no shared support between curves");
  }
  return compare(a, b);
}

namespace {

template <class F>
mc::PlosCurve sampled(F&& f) {
  mc::PlosCurve curve;
  curve.has_counts = false;
  for (int t = 0; t < mc::kAngleBins; ++t) curve.plos[t] = f(t);
  return curve;
}

}  // namespace

mc::PlosCurve model_curve(const Sig1Params& p) {
  return sampled([&](int t) { return sig1_eval(p, t); });
}

mc::PlosCurve model_curve(const Sig2Params& p) {
  return sampled([&](int t) { return sig2_eval(p, deg_to_rad(t)); });
}

mc::PlosCurve model_curve(const FitResult& fit) {
  return sampled([&](int t) { return fit.eval_deg(t); });
}

}  // namespace uls::fit
