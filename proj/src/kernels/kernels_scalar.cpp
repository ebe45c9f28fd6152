#include <cmath>
#include <limits>

#include "kernels_internal.hpp"

namespace dfock::kernels::detail {
namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void cdot_conj(const double* ar, const double* ai, const double* br, const double* bi, std::size_t n, double* out_re,
               double* out_im) {
  double re = 0, im = 0;
  for (std::size_t i = 0; i < n; ++i) {
    re += ar[i] * br[i] + ai[i] * bi[i];
    im += ai[i] * br[i] - ar[i] * bi[i];
  }
  *out_re = re;
  *out_im = im;
}

std::size_t count_in_disks(double px, double py, const double* cx, const double* cy, const double* rho2,
                           double scale2, std::size_t n) {
  std::size_t count = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double dx = px - cx[k];
    const double dy = py - cy[k];
    const double d2 = dx * dx + dy * dy;
    count += d2 < rho2[k] * scale2 ? 1 : 0;
  }
  return count;
}

double min_scaled_dist2(double px, double py, const double* cx, const double* cy, const double* inv_rho2,
                        std::size_t n) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    const double dx = px - cx[k];
    const double dy = py - cy[k];
    const double v = (dx * dx + dy * dy) * inv_rho2[k];
    best = v < best ? v : best;
  }
  return best;
}

void disk_indicator(const double* x, const double* y, std::size_t n, double cx, double cy, double r2,
                    std::uint8_t* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - cx;
    const double dy = y[i] - cy;
    out[i] = dx * dx + dy * dy < r2 ? 1 : 0;
  }
}

void polka_indicator(const double* x, const double* y, std::size_t n, double ox, double oy, double pitch,
                     double dot2, std::uint8_t* out) {
  const double inv = 1.0 / pitch;
  for (std::size_t i = 0; i < n; ++i) {
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
  for (std::size_t i = 0; i < n; ++i) {
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

}  // namespace

std::size_t bracket(const double* v, std::size_t n, double lo, double hi, double* inside, std::size_t* count) {
  std::size_t below = 0, c = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = v[i];
    below += x < lo;
    if (x >= lo && x <= hi) inside[c++] = x;
  }
  *count = c;
  return below;
}

const Table& scalar_impl() noexcept {
  static const Table table{Isa::Scalar,   &dot,           &cdot_conj, &count_in_disks, &min_scaled_dist2,
                           &disk_indicator, &polka_indicator, &poly_abs2,     &bracket};
  return table;
}

}  // namespace dfock::kernels::detail
