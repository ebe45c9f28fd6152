// Compiled with -mavx2 -mfma -ffp-contract=off. Only dot() uses FMA; the
// elementwise kernels mirror the scalar operation order exactly.

#include <immintrin.h>

#include <bit>
#include <cmath>
#include <limits>

#include "kernels_internal.hpp"

namespace dfock::kernels::detail {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline void store_mask(__m256d cmp, std::uint8_t* out) {
  const int bits = _mm256_movemask_pd(cmp);
  out[0] = static_cast<std::uint8_t>(bits & 1);
  out[1] = static_cast<std::uint8_t>((bits >> 1) & 1);
  out[2] = static_cast<std::uint8_t>((bits >> 2) & 1);
  out[3] = static_cast<std::uint8_t>((bits >> 3) & 1);
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void cdot_conj(const double* ar, const double* ai, const double* br, const double* bi, std::size_t n, double* out_re,
               double* out_im) {
  __m256d re = _mm256_setzero_pd();
  __m256d im = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xr = _mm256_loadu_pd(ar + i);
    const __m256d xi = _mm256_loadu_pd(ai + i);
    const __m256d yr = _mm256_loadu_pd(br + i);
    const __m256d yi = _mm256_loadu_pd(bi + i);
    re = _mm256_fmadd_pd(xr, yr, re);
    re = _mm256_fmadd_pd(xi, yi, re);
    im = _mm256_fmadd_pd(xi, yr, im);
    im = _mm256_fnmadd_pd(xr, yi, im);
  }
  double sr = hsum(re);
  double si = hsum(im);
  for (; i < n; ++i) {
    sr += ar[i] * br[i] + ai[i] * bi[i];
    si += ai[i] * br[i] - ar[i] * bi[i];
  }
  *out_re = sr;
  *out_im = si;
}

std::size_t count_in_disks(double px, double py, const double* cx, const double* cy, const double* rho2,
                           double scale2, std::size_t n) {
  const __m256d vpx = _mm256_set1_pd(px);
  const __m256d vpy = _mm256_set1_pd(py);
  const __m256d vs2 = _mm256_set1_pd(scale2);
  std::size_t count = 0;
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d dx = _mm256_sub_pd(vpx, _mm256_loadu_pd(cx + k));
    const __m256d dy = _mm256_sub_pd(vpy, _mm256_loadu_pd(cy + k));
    const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    const __m256d r2 = _mm256_mul_pd(_mm256_loadu_pd(rho2 + k), vs2);
    count += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(_mm256_movemask_pd(_mm256_cmp_pd(d2, r2, _CMP_LT_OQ)))));
  }
  for (; k < n; ++k) {
    const double dx = px - cx[k];
    const double dy = py - cy[k];
    const double d2 = dx * dx + dy * dy;
    count += d2 < rho2[k] * scale2 ? 1 : 0;
  }
  return count;
}

double min_scaled_dist2(double px, double py, const double* cx, const double* cy, const double* inv_rho2,
                        std::size_t n) {
  const __m256d vpx = _mm256_set1_pd(px);
  const __m256d vpy = _mm256_set1_pd(py);
  __m256d best = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d dx = _mm256_sub_pd(vpx, _mm256_loadu_pd(cx + k));
    const __m256d dy = _mm256_sub_pd(vpy, _mm256_loadu_pd(cy + k));
    const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    best = _mm256_min_pd(best, _mm256_mul_pd(d2, _mm256_loadu_pd(inv_rho2 + k)));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, best);
  double b = lanes[0];
  for (int l = 1; l < 4; ++l) b = lanes[l] < b ? lanes[l] : b;
  for (; k < n; ++k) {
    const double dx = px - cx[k];
    const double dy = py - cy[k];
    const double v = (dx * dx + dy * dy) * inv_rho2[k];
    b = v < b ? v : b;
  }
  return b;
}

void disk_indicator(const double* x, const double* y, std::size_t n, double cx, double cy, double r2,
                    std::uint8_t* out) {
  const __m256d vcx = _mm256_set1_pd(cx);
  const __m256d vcy = _mm256_set1_pd(cy);
  const __m256d vr2 = _mm256_set1_pd(r2);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(x + i), vcx);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(y + i), vcy);
    const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    store_mask(_mm256_cmp_pd(d2, vr2, _CMP_LT_OQ), out + i);
  }
  for (; i < n; ++i) {
    const double dx = x[i] - cx;
    const double dy = y[i] - cy;
    out[i] = dx * dx + dy * dy < r2 ? 1 : 0;
  }
}

void polka_indicator(const double* x, const double* y, std::size_t n, double ox, double oy, double pitch,
                     double dot2, std::uint8_t* out) {
  const double inv = 1.0 / pitch;
  const __m256d vox = _mm256_set1_pd(ox);
  const __m256d voy = _mm256_set1_pd(oy);
  const __m256d vinv = _mm256_set1_pd(inv);
  const __m256d vp = _mm256_set1_pd(pitch);
  const __m256d vd2 = _mm256_set1_pd(dot2);
  constexpr int kRound = _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d sx = _mm256_sub_pd(_mm256_loadu_pd(x + i), vox);
    const __m256d sy = _mm256_sub_pd(_mm256_loadu_pd(y + i), voy);
    const __m256d kx = _mm256_round_pd(_mm256_mul_pd(sx, vinv), kRound);
    const __m256d ky = _mm256_round_pd(_mm256_mul_pd(sy, vinv), kRound);
    const __m256d dx = _mm256_sub_pd(sx, _mm256_mul_pd(kx, vp));
    const __m256d dy = _mm256_sub_pd(sy, _mm256_mul_pd(ky, vp));
    const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    store_mask(_mm256_cmp_pd(d2, vd2, _CMP_LT_OQ), out + i);
  }
  for (; i < n; ++i) {
    const double sx = x[i] - ox;
    const double sy = y[i] - oy;
    const double kx = std::nearbyint(sx * inv);
    const double ky = std::nearbyint(sy * inv);
    const double dx = sx - kx * pitch;
    const double dy = sy - ky * pitch;
    out[i] = dx * dx + dy * dy < dot2 ? 1 : 0;
  }
}

void poly_abs2(const double* cr, const double* ci, std::size_t degree, const double* x, const double* y,
               std::size_t n, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vx = _mm256_loadu_pd(x + i);
    const __m256d vy = _mm256_loadu_pd(y + i);
    __m256d pr = _mm256_set1_pd(cr[degree]);
    __m256d pi = _mm256_set1_pd(ci[degree]);
    for (std::size_t j = degree; j-- > 0;) {
      const __m256d nr = _mm256_sub_pd(_mm256_mul_pd(pr, vx), _mm256_mul_pd(pi, vy));
      const __m256d ni = _mm256_add_pd(_mm256_mul_pd(pr, vy), _mm256_mul_pd(pi, vx));
      pr = _mm256_add_pd(nr, _mm256_set1_pd(cr[j]));
      pi = _mm256_add_pd(ni, _mm256_set1_pd(ci[j]));
    }
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_mul_pd(pr, pr), _mm256_mul_pd(pi, pi)));
  }
  for (; i < n; ++i) {
    double pr = cr[degree];
    double pi = ci[degree];
    for (std::size_t j = degree; j-- > 0;) {
      const double nr = pr * x[i] - pi * y[i];
      const double ni = pr * y[i] + pi * x[i];
      pr = nr + cr[j];
      pi = ni + ci[j];
    }
    out[i] = pr * pr + pi * pi;
  }
}

std::size_t bracket(const double* v, std::size_t n, double lo, double hi, double* inside, std::size_t* count) {
  const __m256d vlo = _mm256_set1_pd(lo);
  const __m256d vhi = _mm256_set1_pd(hi);
  std::size_t below = 0, c = 0, i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(v + i);
    below += static_cast<std::size_t>(__builtin_popcount(_mm256_movemask_pd(_mm256_cmp_pd(x, vlo, _CMP_LT_OQ))));
    const __m256d in = _mm256_and_pd(_mm256_cmp_pd(x, vlo, _CMP_GE_OQ), _mm256_cmp_pd(x, vhi, _CMP_LE_OQ));
    int mask = _mm256_movemask_pd(in);
    while (mask) {
      const int k = __builtin_ctz(static_cast<unsigned>(mask));
      inside[c++] = v[i + static_cast<std::size_t>(k)];
      mask &= mask - 1;
    }
  }
  for (; i < n; ++i) {
    const double x = v[i];
    below += x < lo;
    if (x >= lo && x <= hi) inside[c++] = x;
  }
  *count = c;
  return below;
}

}  // namespace

const Table& avx2_impl() noexcept {
  static const Table table{Isa::Avx2,     &dot,           &cdot_conj, &count_in_disks, &min_scaled_dist2,
                           &disk_indicator, &polka_indicator, &poly_abs2, &bracket};
  return table;
}

}  // namespace dfock::kernels::detail
