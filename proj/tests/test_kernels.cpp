#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "uls/rng.hpp"
#include "uls/simd/kernels.hpp"

using namespace uls;
using namespace uls::simd;

namespace {

Footprints random_boxes(Rng& rng, std::size_t n) {
  Footprints fp;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = rng.uniform(0, 100), y = rng.uniform(0, 100);
    fp.push_back(x, y, x + rng.uniform(1, 20), y + rng.uniform(1, 20),
                 rng.uniform(0, 50));
  }
  fp.finalize();
  return fp;
}

Segment random_segment(Rng& rng) {
  Segment s{rng.uniform(0, 120), rng.uniform(0, 120), rng.uniform(0, 80),
            rng.uniform(-120, 120), rng.uniform(-120, 120), 0};
  s.dz = -s.az * rng.uniform();
  switch (rng.below(4)) {
    case 0: s.dx = 0.0; break;
    case 1: s.dy = 0.0; break;
    default: break;
  }
  return s;
}

std::vector<Isa> available() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::Scalar, Isa::Sse2, Isa::Avx2}) {
    if (isa_available(isa)) out.push_back(isa);
  }
  return out;
}

}  // namespace

TEST_CASE("dispatch picks an available ISA") {
  CHECK(isa_available(Isa::Scalar));
  CHECK(isa_available(best_isa()));
  CHECK(default_kernels().isa == best_isa());
  for (Isa isa : available()) CHECK(kernels(isa).isa == isa);
  MESSAGE("best ISA: " << to_string(best_isa()));
}

TEST_CASE("padding keeps lane multiples") {
  for (std::size_t n = 0; n <= 9; ++n) {
    Rng rng(n);
    const auto fp = random_boxes(rng, n);
    CHECK(fp.size() == n);
    CHECK(fp.padded_size() % kLaneWidth == 0);
    CHECK(fp.padded_size() >= n);
    CHECK(fp.padded_size() < n + kLaneWidth);
  }
}

TEST_CASE("all ISA variants agree with the scalar reference") {
  const auto isas = available();
  Rng rng(2024);
  std::size_t blocked = 0, total = 0;
  for (std::size_t n = 0; n <= 37; ++n) {
    const auto fp = random_boxes(rng, n);
    for (int q = 0; q < 400; ++q) {
      const Segment s = random_segment(rng);
      const auto ref = first_blocker_scalar(fp, s, 1e-9);
      for (Isa isa : isas) {
        REQUIRE(kernels(isa).first_blocker(fp, s, 1e-9) == ref);
      }
      const double px = rng.uniform(0, 120), py = rng.uniform(0, 120);
      const double pz = rng.uniform(0, 60);
      const auto cref = first_container_scalar(fp, px, py, pz);
      for (Isa isa : isas) {
        REQUIRE(kernels(isa).first_container(fp, px, py, pz) == cref);
      }
      blocked += ref >= 0;
      ++total;
    }
  }
  // Both outcomes must actually be exercised.
  CHECK(blocked > total / 10);
  CHECK(blocked < total * 9 / 10);
}

TEST_CASE("grazing and tie cases agree across ISAs") {
  Footprints fp;
  fp.push_back(10, 10, 20, 20, 5);
  fp.push_back(20, 10, 30, 20, 5);
  fp.push_back(40, 40, 50, 50, 10);
  fp.finalize();
  const std::vector<Segment> cases = {
      {0, 10, 10, 40, 0, -10},   // along the shared bottom edge
      {0, 20, 10, 40, 0, -10},   // along the top edge
      {20, 0, 10, 0, 40, -10},   // along the shared vertical edge
      {0, 0, 10, 40, 40, -10},   // diagonal through corners (20,20) and (40,40)
      {0, 15, 5, 60, 0, 0},      // exactly at roof height
      {0, 15, 5 + 1e-12, 60, 0, 0},
      {0, 15, 5 + 1e-6, 60, 0, 0},
      {15, 15, 5, 0, 0, 0},      // zero-length
  };
  for (const auto& s : cases) {
    const auto ref = first_blocker_scalar(fp, s, 1e-9);
    for (Isa isa : available()) {
      CHECK(kernels(isa).first_blocker(fp, s, 1e-9) == ref);
    }
  }
  CHECK(first_blocker_scalar(fp, cases[0], 1e-9) == -1);
  CHECK(first_blocker_scalar(fp, cases[1], 1e-9) == -1);
  CHECK(first_blocker_scalar(fp, cases[2], 1e-9) == -1);
  CHECK(first_blocker_scalar(fp, cases[4], 1e-9) == 0);
  CHECK(first_blocker_scalar(fp, cases[5], 1e-9) == 0);
  CHECK(first_blocker_scalar(fp, cases[6], 1e-9) == -1);
}

TEST_CASE("container test is closed in the plane and strict in height") {
  Footprints fp;
  fp.push_back(0, 0, 10, 10, 5);
  fp.finalize();
  for (Isa isa : available()) {
    const auto k = kernels(isa);
    CHECK(k.first_container(fp, 5, 5, 4.9) == 0);
    CHECK(k.first_container(fp, 10, 10, 0) == 0);
    CHECK(k.first_container(fp, 5, 5, 5.0) == -1);
    CHECK(k.first_container(fp, 10.001, 5, 0) == -1);
    CHECK(k.first_container(fp, 5, 5, -std::numeric_limits<double>::infinity()) == 0);
  }
}
