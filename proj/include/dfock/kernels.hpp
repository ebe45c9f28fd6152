#pragma once

// Data-parallel inner loops shared by the numerical modules.
//
// Every kernel has a scalar reference implementation and, on x86-64 builds,
// an AVX2 variant. The variant is picked once at first use from the CPU
// feature bits; DFOCK_ISA=scalar in the environment forces the reference
// path. Elementwise kernels (indicators, counts, minima, Horner) perform the
// same IEEE operations in the same order on both paths and agree bitwise.
// Reductions (dot, cdot_conj) differ only by summation order.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>

namespace dfock::kernels {

enum class Isa { Scalar, Avx2 };

struct Table {
  Isa isa;

  double (*dot)(const double* a, const double* b, std::size_t n);

  // sum_i a_i * conj(b_i)
  void (*cdot_conj)(const double* ar, const double* ai, const double* br, const double* bi, std::size_t n,
                    double* out_re, double* out_im);

  // #{k : (px-cx_k)^2 + (py-cy_k)^2 < scale2 * rho2_k}
  std::size_t (*count_in_disks)(double px, double py, const double* cx, const double* cy, const double* rho2,
                                double scale2, std::size_t n);

  // min_k ((px-cx_k)^2 + (py-cy_k)^2) * inv_rho2_k, +inf for n == 0
  double (*min_scaled_dist2)(double px, double py, const double* cx, const double* cy, const double* inv_rho2,
                             std::size_t n);

  // out_i = (x_i-cx)^2 + (y_i-cy)^2 < r2
  void (*disk_indicator)(const double* x, const double* y, std::size_t n, double cx, double cy, double r2,
                         std::uint8_t* out);

  // out_i = distance from (x_i,y_i) to the nearest node of the square lattice
  // origin + pitch*Z^2 is below sqrt(dot2)
  void (*polka_indicator)(const double* x, const double* y, std::size_t n, double ox, double oy, double pitch,
                          double dot2, std::uint8_t* out);

  // out_i = |p(x_i + i y_i)|^2 for p(u) = sum_j c_j u^j, coefficients ascending
  void (*poly_abs2)(const double* cr, const double* ci, std::size_t degree, const double* x, const double* y,
                    std::size_t n, double* out);

  // Returns #{i : v_i < lo}; copies every v_i in [lo, hi] to inside (in
  // order, capacity n) and stores their number in *count.
  std::size_t (*bracket)(const double* v, std::size_t n, double lo, double hi, double* inside, std::size_t* count);
};

const Table& scalar_table() noexcept;

/// nullptr when the build has no AVX2 variant or the CPU lacks AVX2/FMA.
const Table* avx2_table() noexcept;

const Table& active() noexcept;
Isa active_isa() noexcept;
void select(Isa isa);
const char* name(Isa isa) noexcept;

// Span conveniences over the active table.

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

inline std::complex<double> cdot_conj(std::span<const double> ar, std::span<const double> ai,
                                      std::span<const double> br, std::span<const double> bi) {
  double re = 0, im = 0;
  active().cdot_conj(ar.data(), ai.data(), br.data(), bi.data(), ar.size(), &re, &im);
  return {re, im};
}

}  // namespace dfock::kernels
