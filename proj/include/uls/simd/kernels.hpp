#pragma once

// Footprint kernels behind the LoS test and the placement rejection loops.
//
// Every ISA variant evaluates the same sequence of IEEE operations as the
// scalar reference (no FMA contraction, identical min/max ordering), so the
// variants agree bit-for-bit, not just within a tolerance. The equivalence
// tests in tests/test_kernels.cpp rely on that.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace uls::simd {

inline constexpr std::size_t kLaneWidth = 4;

// Structure-of-arrays copy of building prisms, padded with empty sentinel
// boxes to a multiple of kLaneWidth.
class Footprints {
 public:
  Footprints() = default;
  void reserve(std::size_t n);
  void push_back(double x0, double y0, double x1, double y1, double height);
  // Pads to a lane multiple; call once after the last push_back.
  void finalize();

  std::size_t size() const { return count_; }
  std::size_t padded_size() const { return x0_.size(); }
  const double* x0() const { return x0_.data(); }
  const double* y0() const { return y0_.data(); }
  const double* x1() const { return x1_.data(); }
  const double* y1() const { return y1_.data(); }
  const double* height() const { return h_.data(); }

 private:
  std::size_t count_ = 0;
  std::vector<double> x0_, y0_, x1_, y1_, h_;
};

// 2-D ground segment from (ax, ay) to (ax+dx, ay+dy), with the LoS line at
// height az + t*dz for t in [0, 1].
struct Segment {
  double ax, ay, az;
  double dx, dy, dz;
};

// Index of the lowest-numbered building that blocks the segment, or -1.
// A building blocks when the open segment crosses its footprint interior on
// a parameter interval [t0, t1] with t0 < t1 and
// min(z(t0), z(t1)) <= height + tie_eps.
using FirstBlockerFn = std::ptrdiff_t (*)(const Footprints&, const Segment&,
                                          double tie_eps);
// Index of the lowest-numbered building whose closed footprint contains
// (x, y) with z < height, or -1.
using FirstContainerFn = std::ptrdiff_t (*)(const Footprints&, double x,
                                            double y, double z);

enum class Isa { Scalar, Sse2, Avx2 };

std::string_view to_string(Isa isa);
bool isa_available(Isa isa);
// Widest ISA supported by both the build and the running CPU.
Isa best_isa();

struct KernelTable {
  Isa isa;
  FirstBlockerFn first_blocker;
  FirstContainerFn first_container;
};

// Throws std::invalid_argument when `isa` is unavailable.
KernelTable kernels(Isa isa);
const KernelTable& default_kernels();

std::ptrdiff_t first_blocker_scalar(const Footprints&, const Segment&, double);
std::ptrdiff_t first_container_scalar(const Footprints&, double, double, double);
#if defined(ULS_HAVE_X86_KERNELS)
std::ptrdiff_t first_blocker_sse2(const Footprints&, const Segment&, double);
std::ptrdiff_t first_container_sse2(const Footprints&, double, double, double);
std::ptrdiff_t first_blocker_avx2(const Footprints&, const Segment&, double);
std::ptrdiff_t first_container_avx2(const Footprints&, double, double, double);
#endif

}  // namespace uls::simd
