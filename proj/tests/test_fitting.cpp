#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "uls/error.hpp"
#include "uls/fitting.hpp"
#include "uls/rng.hpp"

using namespace uls;
using namespace uls::fit;

namespace {

fit::Samples samples_from(auto&& f) {
  Samples s;
  for (int t = 0; t <= 90; ++t) {
    s.theta_deg.push_back(t);
    s.plos.push_back(f(t));
  }
  return s;
}

double rmse_against(const FitResult& r, const Samples& s) {
  double acc = 0.0;
  for (std::size_t i = 0; i < s.theta_deg.size(); ++i) {
    const double e = r.eval_deg(s.theta_deg[i]) - s.plos[i];
    acc += e * e;
  }
  return std::sqrt(acc / s.theta_deg.size());
}

}  // namespace

TEST_CASE("model evaluation") {
  const Sig1Params s1{6.55, 0.069};
  CHECK(sig1_eval(s1, 6.55) == doctest::Approx(1.0 / 7.55));
  CHECK(sig1_eval(s1, 6.55) == doctest::Approx(0.1325).epsilon(1e-3));
  const double by_hand = 1.0 / (1.0 + 6.55 * std::exp(-0.069 * 83.45));
  CHECK(sig1_eval(s1, 90.0) == doctest::Approx(by_hand));
  CHECK(std::abs(sig1_eval(s1, 90.0) - 0.980) < 5e-4);
  CHECK(sig1_eval(s1, 1000.0) == doctest::Approx(1.0));

  const Sig2Params s2{-4.933, 12.4, -12.83, 4.049};
  CHECK(std::abs(sig2_eval(s2, 0.0) - 0.0171) < 5e-5);
  CHECK(std::abs(sig2_eval(s2, std::numbers::pi / 2) - 0.9903) < 5e-5);
  for (double t : {0.0, 0.3, 1.0, 1.5}) CHECK(sig2_eval({}, t) == 0.5);
  CHECK(deg_to_rad(180.0) == std::numbers::pi);

  for (int t = 0; t <= 90; ++t) {
    const double a = sig1_eval(s1, t), b = sig2_eval(s2, deg_to_rad(t));
    CHECK(a > 0.0);
    CHECK(a < 1.0);
    CHECK(b > 0.0);
    CHECK(b < 1.0);
  }
  CHECK(parse_model("sig1") == Model::Sig1);
  CHECK_FALSE(parse_model("sig3").has_value());
}

TEST_CASE("self-family Sig2 fits are exact") {
  const std::vector<Sig2Params> truths = {
      {-4.933, 12.4, -12.83, 4.049}, {-13.16, 37.89, -37.91, 13.73},
      {-2.772, 8.748, -11.10, 4.276}, {0.5, -1.0, -2.0, 1.0}};
  for (const auto& truth : truths) {
    const auto s = samples_from([&](int t) { return sig2_eval(truth, deg_to_rad(t)); });
    const auto r = fit_sig2(s);
    CHECK(r.model == Model::Sig2);
    CHECK(r.rmse < 1e-6);
    CHECK(rmse_against(r, s) == doctest::Approx(r.rmse).epsilon(1e-9).scale(1));
    CHECK(r.rmse <= r.initial_rmse);
    CHECK(r.support.size() == 91);
  }
}

TEST_CASE("self-family Sig1 fits recover the coefficients") {
  for (const Sig1Params truth : {Sig1Params{6.55, 0.069}, Sig1Params{19.8, 0.067},
                                 Sig1Params{2.96, 0.117}}) {
    const auto s = samples_from([&](int t) { return sig1_eval(truth, t); });
    const auto r = fit_sig1(s);
    const auto p = std::get<Sig1Params>(r.params);
    CHECK(r.rmse < 1e-6);
    CHECK(std::abs(p.a - truth.a) / truth.a < 0.01);
    CHECK(std::abs(p.b - truth.b) / truth.b < 0.01);
    CHECK(r.rmse <= r.initial_rmse);
  }
}

TEST_CASE("flat target") {
  const auto s = samples_from([](int) { return 0.5; });
  const auto r = fit_sig2(s);
  CHECK(r.rmse < 1e-9);
  for (int t = 0; t <= 90; t += 10) CHECK(r.eval_deg(t) == doctest::Approx(0.5));
}

TEST_CASE("refinement never loses to its starting point") {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const Sig2Params truth{rng.uniform(-10, 0), rng.uniform(0, 25),
                           rng.uniform(-25, -5), rng.uniform(1, 6)};
    const auto s = samples_from([&](int t) {
      const double p = sig2_eval(truth, deg_to_rad(t)) + rng.uniform(-0.05, 0.05);
      return std::clamp(p, 0.0, 1.0);
    });
    const auto r2 = fit_sig2(s);
    const auto r1 = fit_sig1(s);
    CHECK(r2.rmse <= r2.initial_rmse);
    CHECK(r1.rmse <= r1.initial_rmse);
    CHECK(rmse_against(r2, s) == doctest::Approx(r2.rmse).epsilon(1e-9));
    CHECK(r2.rmse < 0.05);
  }
}

TEST_CASE("eligibility and insufficient data") {
  mc::PlosCurve c;
  for (int t = 0; t < 4; ++t) {
    for (int k = 0; k < 40; ++k) c.add(t * 20, k % 2);
  }
  for (int k = 0; k < 10; ++k) c.add(85, true);
  c.finalize();
  const auto s = eligible_samples(c, 30);
  CHECK(s.theta_deg == std::vector<int>{0, 20, 40, 60});
  CHECK(eligible_samples(c, 5).theta_deg.size() == 5);
  for (auto fn : {+[](const mc::PlosCurve& x) { return fit_sig1(x); },
                  +[](const mc::PlosCurve& x) { return fit_sig2(x); }}) {
    try {
      fn(c);
      FAIL("expected InsufficientData");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InsufficientData);
    }
  }
  FitOptions loose;
  loose.min_count = 5;
  CHECK_NOTHROW(fit_sig2(c, loose));

  // Closed-form curves carry no counts; every defined bin is eligible.
  CHECK(eligible_samples(model_curve(Sig2Params{}), 30).theta_deg.size() == 91);
}

TEST_CASE("comparison metrics") {
  const auto ref = model_curve(Sig1Params{6.55, 0.069});
  const auto self = compare(ref, ref);
  CHECK(self.rmse == 0.0);
  CHECK(self.mae == 0.0);
  CHECK(self.r2 == 1.0);
  CHECK(self.n == 91);

  auto shifted = ref;
  for (auto& p : shifted.plos) *p = *p + 0.1;
  const auto off = compare(shifted, ref);
  CHECK(off.rmse == doctest::Approx(0.1));
  CHECK(off.mae == doctest::Approx(0.1));
  CHECK(off.r2 < 1.0);

  // Independent R^2 from the textbook definition.
  std::vector<double> m{0.1, 0.4, 0.35, 0.8}, r{0.2, 0.3, 0.5, 0.9};
  const double mean = (0.2 + 0.3 + 0.5 + 0.9) / 4;
  double ss_res = 0, ss_tot = 0;
  for (int i = 0; i < 4; ++i) {
    ss_res += (m[i] - r[i]) * (m[i] - r[i]);
    ss_tot += (r[i] - mean) * (r[i] - mean);
  }
  CHECK(compare(std::span<const double>(m), std::span<const double>(r)).r2 ==
        doctest::Approx(1 - ss_res / ss_tot));

  // Constant reference: R^2 is not clamped.
  std::vector<double> flat(4, 0.5);
  const auto edge = compare(std::span<const double>(m), std::span<const double>(flat));
  CHECK(edge.r2 <= 0.0);
  CHECK(compare(std::span<const double>(flat), std::span<const double>(flat)).r2 == 1.0);

  // Support restriction and shared support.
  const std::vector<int> band{5, 6, 7};
  CHECK(compare(shifted, ref, band).n == 3);
  mc::PlosCurve sparse;
  sparse.add(10, true);
  sparse.finalize();
  CHECK(compare(sparse, ref).n == 1);
  mc::PlosCurve none;
  none.finalize();
  try {
    compare(none, ref);
    FAIL("expected EmptySupport");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptySupport);
  }
}

TEST_CASE("model curves are closed-form") {
  const Sig2Params p{-4.933, 12.4, -12.83, 4.049};
  const auto c = model_curve(p);
  CHECK_FALSE(c.has_counts);
  for (int t = 0; t <= 90; ++t) {
    REQUIRE(c.plos[t].has_value());
    CHECK(*c.plos[t] == sig2_eval(p, deg_to_rad(t)));
  }
}
