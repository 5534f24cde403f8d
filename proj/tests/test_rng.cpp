#include <doctest.h>

#include <set>

#include "uls/rng.hpp"

using uls::derive_seed;
using uls::Rng;

TEST_CASE("derive_seed is deterministic and separates streams") {
  CHECK(derive_seed(1, 0, 0) == derive_seed(1, 0, 0));
  std::set<std::uint64_t> seen;
  for (std::uint64_t master : {0ULL, 1ULL, 2ULL}) {
    for (std::uint64_t i = 0; i < 100; ++i) {
      for (std::uint64_t s : {uls::kGenerationStream, uls::kPlacementStream}) {
        seen.insert(derive_seed(master, i, s));
      }
    }
  }
  CHECK(seen.size() == 600);
}

TEST_CASE("mix64 is a bijection on a sample") {
  std::set<std::uint64_t> out;
  for (std::uint64_t x = 0; x < 10000; ++x) out.insert(uls::mix64(x));
  CHECK(out.size() == 10000);
}

TEST_CASE("uniform stays in [0,1) and has the right mean") {
  Rng rng(42);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("below covers its range") {
  Rng rng(3);
  std::set<std::uint64_t> hit;
  for (int i = 0; i < 1000; ++i) {
    const auto v = rng.below(7);
    REQUIRE(v < 7);
    hit.insert(v);
  }
  CHECK(hit.size() == 7);
}

TEST_CASE("exponential has unit mean") {
  Rng rng(9);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double e = rng.exponential();
    REQUIRE(e >= 0.0);
    sum += e;
  }
  CHECK(sum / n == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("same seed gives the same stream") {
  Rng a(77), b(77);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
}
