#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "dfock/kernels.hpp"

using namespace dfock;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

bool bitwise_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("active table honors explicit selection") {
    const kernels::Isa before = kernels::active_isa();
    kernels::select(kernels::Isa::Scalar);
    CHECK(kernels::active_isa() == kernels::Isa::Scalar);
    if (kernels::avx2_table() != nullptr) {
      kernels::select(kernels::Isa::Avx2);
      CHECK(kernels::active_isa() == kernels::Isa::Avx2);
    }
    kernels::select(before);
  }

  TEST_CASE("scalar reference values") {
    const kernels::Table& s = kernels::scalar_table();
    const double a[] = {1, 2, 3};
    const double b[] = {4, 5, 6};
    CHECK(s.dot(a, b, 3) == 32.0);
    double re = 0, im = 0;
    // (1+2i) conj(3+4i) = 11 + 2i
    const double ar[] = {1}, ai[] = {2}, br[] = {3}, bi[] = {4};
    s.cdot_conj(ar, ai, br, bi, 1, &re, &im);
    CHECK(re == 11.0);
    CHECK(im == 2.0);
    const double cr[] = {1, 0, 1}, ci[] = {0, 0, 0};  // 1 + u^2
    const double x[] = {0.0}, y[] = {1.0};            // u = i
    double out = -1;
    s.poly_abs2(cr, ci, 2, x, y, 1, &out);
    CHECK(out == 0.0);
    CHECK(std::isinf(s.min_scaled_dist2(0, 0, nullptr, nullptr, nullptr, 0)));
    const double v[] = {5, 1, 3, 2, 4, 3};
    double inside[6];
    std::size_t count = 0;
    CHECK(s.bracket(v, 6, 2, 3, inside, &count) == 1);
    REQUIRE(count == 3);
    CHECK(inside[0] == 3);
    CHECK(inside[1] == 2);
    CHECK(inside[2] == 3);
  }

  TEST_CASE("AVX2 variants match the scalar reference") {
    const kernels::Table* v = kernels::avx2_table();
    if (v == nullptr) {
      MESSAGE("AVX2 unavailable; equivalence not exercised");
      return;
    }
    const kernels::Table& s = kernels::scalar_table();
    std::mt19937_64 rng(42);
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 17u, 64u, 1001u}) {
      CAPTURE(n);
      const auto a = random_vec(rng, n, -2, 2);
      const auto b = random_vec(rng, n, -2, 2);
      const auto c = random_vec(rng, n, -2, 2);
      const auto d = random_vec(rng, n, -2, 2);

      const double ds = s.dot(a.data(), b.data(), n);
      const double dv = v->dot(a.data(), b.data(), n);
      CHECK(std::abs(ds - dv) <= 1e-13 * (1 + static_cast<double>(n)));

      double sr = 0, si = 0, vr = 0, vi = 0;
      s.cdot_conj(a.data(), b.data(), c.data(), d.data(), n, &sr, &si);
      v->cdot_conj(a.data(), b.data(), c.data(), d.data(), n, &vr, &vi);
      CHECK(std::abs(sr - vr) <= 1e-13 * (1 + static_cast<double>(n)));
      CHECK(std::abs(si - vi) <= 1e-13 * (1 + static_cast<double>(n)));

      const auto rho2 = random_vec(rng, n, 0.01, 0.5);
      std::vector<double> inv(n);
      for (std::size_t i = 0; i < n; ++i) inv[i] = 1 / rho2[i];
      for (int probe = 0; probe < 20; ++probe) {
        const double px = a.empty() ? 0.3 : a[static_cast<std::size_t>(probe) % n];
        const double py = 0.1 * probe - 1;
        CHECK(s.count_in_disks(px, py, c.data(), d.data(), rho2.data(), 2.5, n) ==
              v->count_in_disks(px, py, c.data(), d.data(), rho2.data(), 2.5, n));
        CHECK(bitwise_equal(s.min_scaled_dist2(px, py, c.data(), d.data(), inv.data(), n),
                            v->min_scaled_dist2(px, py, c.data(), d.data(), inv.data(), n)));
      }

      std::vector<std::uint8_t> os(n), ov(n);
      s.disk_indicator(a.data(), b.data(), n, 0.2, -0.1, 1.3, os.data());
      v->disk_indicator(a.data(), b.data(), n, 0.2, -0.1, 1.3, ov.data());
      CHECK(os == ov);
      s.polka_indicator(a.data(), b.data(), n, 0.05, -0.02, 0.4, 0.01, os.data());
      v->polka_indicator(a.data(), b.data(), n, 0.05, -0.02, 0.4, 0.01, ov.data());
      CHECK(os == ov);

      for (std::size_t deg : {0u, 1u, 5u, 20u}) {
        const auto cr = random_vec(rng, deg + 1, -1, 1);
        const auto ci = random_vec(rng, deg + 1, -1, 1);
        std::vector<double> ps(n), pv(n);
        s.poly_abs2(cr.data(), ci.data(), deg, a.data(), b.data(), n, ps.data());
        v->poly_abs2(cr.data(), ci.data(), deg, a.data(), b.data(), n, pv.data());
        bool same = true;
        for (std::size_t i = 0; i < n; ++i) same = same && bitwise_equal(ps[i], pv[i]);
        CHECK(same);
      }

      std::vector<double> is(n), iv(n);
      std::size_t cs = 0, cv = 0;
      CHECK(s.bracket(a.data(), n, -0.5, 0.7, is.data(), &cs) == v->bracket(a.data(), n, -0.5, 0.7, iv.data(), &cv));
      REQUIRE(cs == cv);
      CHECK(std::equal(is.begin(), is.begin() + static_cast<std::ptrdiff_t>(cs), iv.begin()));
    }
  }
}
