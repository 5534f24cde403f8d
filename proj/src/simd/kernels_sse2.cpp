// SSE2 variants: two doubles per register, two registers per lane group.

#include <emmintrin.h>

#include <limits>

#include "uls/simd/kernels.hpp"

namespace uls::simd {
namespace {

struct Slab {
  __m128d lo, hi;
};

inline Slab slab(__m128d lower, __m128d upper, __m128d origin, __m128d inv,
                 bool flat) {
  if (flat) {
    const __m128d inside = _mm_and_pd(_mm_cmplt_pd(lower, origin),
                                      _mm_cmplt_pd(origin, upper));
    const __m128d inf = _mm_set1_pd(std::numeric_limits<double>::infinity());
    const __m128d ninf = _mm_set1_pd(-std::numeric_limits<double>::infinity());
    // inside ? -inf : +inf, and the mirror for the upper bound.
    return {_mm_or_pd(_mm_and_pd(inside, ninf), _mm_andnot_pd(inside, inf)),
            _mm_or_pd(_mm_and_pd(inside, inf), _mm_andnot_pd(inside, ninf))};
  }
  const __m128d a = _mm_mul_pd(_mm_sub_pd(lower, origin), inv);
  const __m128d b = _mm_mul_pd(_mm_sub_pd(upper, origin), inv);
  return {_mm_min_pd(a, b), _mm_max_pd(a, b)};
}

inline int blocked_mask(const Footprints& fp, std::size_t i, bool x_flat,
                        bool y_flat, __m128d ax, __m128d ay,
                        __m128d az, __m128d dz, __m128d inv_dx, __m128d inv_dy,
                        __m128d eps) {
  const Slab sx = slab(_mm_loadu_pd(fp.x0() + i), _mm_loadu_pd(fp.x1() + i),
                       ax, inv_dx, x_flat);
  const Slab sy = slab(_mm_loadu_pd(fp.y0() + i), _mm_loadu_pd(fp.y1() + i),
                       ay, inv_dy, y_flat);
  const __m128d t0 = _mm_max_pd(_mm_max_pd(sx.lo, sy.lo), _mm_setzero_pd());
  const __m128d t1 = _mm_min_pd(_mm_min_pd(sx.hi, sy.hi), _mm_set1_pd(1.0));
  const __m128d hit = _mm_cmplt_pd(t0, t1);
  const __m128d z0 = _mm_add_pd(az, _mm_mul_pd(t0, dz));
  const __m128d z1 = _mm_add_pd(az, _mm_mul_pd(t1, dz));
  const __m128d roof = _mm_add_pd(_mm_loadu_pd(fp.height() + i), eps);
  const __m128d low = _mm_cmple_pd(_mm_min_pd(z0, z1), roof);
  return _mm_movemask_pd(_mm_and_pd(hit, low));
}

}  // namespace

std::ptrdiff_t first_blocker_sse2(const Footprints& fp, const Segment& s,
                                  double tie_eps) {
  const bool x_flat = s.dx == 0.0;
  const bool y_flat = s.dy == 0.0;
  const __m128d ax = _mm_set1_pd(s.ax);
  const __m128d ay = _mm_set1_pd(s.ay);
  const __m128d az = _mm_set1_pd(s.az);
  const __m128d dz = _mm_set1_pd(s.dz);
  const __m128d inv_dx = _mm_set1_pd(1.0 / s.dx);
  const __m128d inv_dy = _mm_set1_pd(1.0 / s.dy);
  const __m128d eps = _mm_set1_pd(tie_eps);
  const std::size_t n = fp.padded_size();
  for (std::size_t i = 0; i < n; i += 2) {
    const int mask = blocked_mask(fp, i, x_flat, y_flat, ax, ay, az, dz,
                                  inv_dx, inv_dy, eps);
    if (mask != 0) {
      return static_cast<std::ptrdiff_t>(i + ((mask & 1) ? 0 : 1));
    }
  }
  return -1;
}

std::ptrdiff_t first_container_sse2(const Footprints& fp, double x, double y,
                                    double z) {
  const __m128d px = _mm_set1_pd(x);
  const __m128d py = _mm_set1_pd(y);
  const __m128d pz = _mm_set1_pd(z);
  const std::size_t n = fp.padded_size();
  for (std::size_t i = 0; i < n; i += 2) {
    __m128d in = _mm_cmple_pd(_mm_loadu_pd(fp.x0() + i), px);
    in = _mm_and_pd(in, _mm_cmple_pd(px, _mm_loadu_pd(fp.x1() + i)));
    in = _mm_and_pd(in, _mm_cmple_pd(_mm_loadu_pd(fp.y0() + i), py));
    in = _mm_and_pd(in, _mm_cmple_pd(py, _mm_loadu_pd(fp.y1() + i)));
    in = _mm_and_pd(in, _mm_cmplt_pd(pz, _mm_loadu_pd(fp.height() + i)));
    const int mask = _mm_movemask_pd(in);
    if (mask != 0) {
      return static_cast<std::ptrdiff_t>(i + ((mask & 1) ? 0 : 1));
    }
  }
  return -1;
}

}  // namespace uls::simd
