// AVX2 variants, built with -mavx2 and only called after a CPUID check.

#include <immintrin.h>

#include <bit>
#include <limits>

#include "uls/simd/kernels.hpp"

namespace uls::simd {
namespace {

struct Slab {
  __m256d lo, hi;
};

inline Slab slab(__m256d lower, __m256d upper, __m256d origin, __m256d inv,
                 bool flat) {
  if (flat) {
    const __m256d inside =
        _mm256_and_pd(_mm256_cmp_pd(lower, origin, _CMP_LT_OQ),
                      _mm256_cmp_pd(origin, upper, _CMP_LT_OQ));
    const __m256d inf =
        _mm256_set1_pd(std::numeric_limits<double>::infinity());
    const __m256d ninf =
        _mm256_set1_pd(-std::numeric_limits<double>::infinity());
    return {_mm256_blendv_pd(inf, ninf, inside),
            _mm256_blendv_pd(ninf, inf, inside)};
  }
  const __m256d a = _mm256_mul_pd(_mm256_sub_pd(lower, origin), inv);
  const __m256d b = _mm256_mul_pd(_mm256_sub_pd(upper, origin), inv);
  return {_mm256_min_pd(a, b), _mm256_max_pd(a, b)};
}

}  // namespace

std::ptrdiff_t first_blocker_avx2(const Footprints& fp, const Segment& s,
                                  double tie_eps) {
  const bool x_flat = s.dx == 0.0;
  const bool y_flat = s.dy == 0.0;
  const __m256d ax = _mm256_set1_pd(s.ax);
  const __m256d ay = _mm256_set1_pd(s.ay);
  const __m256d az = _mm256_set1_pd(s.az);
  const __m256d dz = _mm256_set1_pd(s.dz);
  const __m256d inv_dx = _mm256_set1_pd(1.0 / s.dx);
  const __m256d inv_dy = _mm256_set1_pd(1.0 / s.dy);
  const __m256d eps = _mm256_set1_pd(tie_eps);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  const std::size_t n = fp.padded_size();
  for (std::size_t i = 0; i < n; i += kLaneWidth) {
    const Slab sx = slab(_mm256_loadu_pd(fp.x0() + i),
                         _mm256_loadu_pd(fp.x1() + i), ax, inv_dx, x_flat);
    const Slab sy = slab(_mm256_loadu_pd(fp.y0() + i),
                         _mm256_loadu_pd(fp.y1() + i), ay, inv_dy, y_flat);
    const __m256d t0 = _mm256_max_pd(_mm256_max_pd(sx.lo, sy.lo), zero);
    const __m256d t1 = _mm256_min_pd(_mm256_min_pd(sx.hi, sy.hi), one);
    const __m256d hit = _mm256_cmp_pd(t0, t1, _CMP_LT_OQ);
    const __m256d z0 = _mm256_add_pd(az, _mm256_mul_pd(t0, dz));
    const __m256d z1 = _mm256_add_pd(az, _mm256_mul_pd(t1, dz));
    const __m256d roof = _mm256_add_pd(_mm256_loadu_pd(fp.height() + i), eps);
    const __m256d low =
        _mm256_cmp_pd(_mm256_min_pd(z0, z1), roof, _CMP_LE_OQ);
    const int mask = _mm256_movemask_pd(_mm256_and_pd(hit, low));
    if (mask != 0) {
      return static_cast<std::ptrdiff_t>(
          i + static_cast<std::size_t>(std::countr_zero(static_cast<unsigned>(mask))));
    }
  }
  return -1;
}

std::ptrdiff_t first_container_avx2(const Footprints& fp, double x, double y,
                                    double z) {
  const __m256d px = _mm256_set1_pd(x);
  const __m256d py = _mm256_set1_pd(y);
  const __m256d pz = _mm256_set1_pd(z);
  const std::size_t n = fp.padded_size();
  for (std::size_t i = 0; i < n; i += kLaneWidth) {
    __m256d in = _mm256_cmp_pd(_mm256_loadu_pd(fp.x0() + i), px, _CMP_LE_OQ);
    in = _mm256_and_pd(
        in, _mm256_cmp_pd(px, _mm256_loadu_pd(fp.x1() + i), _CMP_LE_OQ));
    in = _mm256_and_pd(
        in, _mm256_cmp_pd(_mm256_loadu_pd(fp.y0() + i), py, _CMP_LE_OQ));
    in = _mm256_and_pd(
        in, _mm256_cmp_pd(py, _mm256_loadu_pd(fp.y1() + i), _CMP_LE_OQ));
    in = _mm256_and_pd(
        in, _mm256_cmp_pd(pz, _mm256_loadu_pd(fp.height() + i), _CMP_LT_OQ));
    const int mask = _mm256_movemask_pd(in);
    if (mask != 0) {
      return static_cast<std::ptrdiff_t>(
          i + static_cast<std::size_t>(std::countr_zero(static_cast<unsigned>(mask))));
    }
  }
  return -1;
}

}  // namespace uls::simd
