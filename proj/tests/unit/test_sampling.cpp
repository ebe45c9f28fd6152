#include <doctest.h>

#include <cmath>
#include <vector>

#include "dfock/errors.hpp"
#include "dfock/sampling.hpp"
#include "oracle_values.hpp"

using namespace dfock;

namespace {

ErrorKind kind_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::Io;
}

const FockTruncation& classical(int n_max = 20) {
  static const FockTruncation t20 = build_truncation(make_weight("abs2"), 20);
  static const FockTruncation t8 = build_truncation(make_weight("abs2"), 8);
  return n_max == 20 ? t20 : t8;
}

}  // namespace

TEST_SUITE("sampling") {
  TEST_CASE("basis norms of the classical weight") {
    const FockTruncation& t = classical();
    for (std::size_t i = 0; i < 4; ++i) {
      const int n = oracle::kBasisNorm2Degree[i];
      CAPTURE(n);
      CHECK(std::exp(2 * t.log_norm[static_cast<std::size_t>(n)]) ==
            doctest::Approx(oracle::kBasisNorm2[i]).epsilon(1e-12));
    }
    CHECK(t.max_tail < 1e-10);
    CHECK(build_truncation(make_weight("abs2"), 0).dim() == 1);
  }

  TEST_CASE("Gram over the plane is the identity") {
    const MaskedGram g = assemble_masked(classical(), {Region::full(), 0.0, 1.0});
    const Eigen::MatrixXcd diff = g.m - Eigen::MatrixXcd::Identity(21, 21);
    CHECK(diff.cwiseAbs().maxCoeff() < 1e-8);
    const SamplingConstant sc = sampling_constant(classical(), Region::full());
    CHECK(std::abs(sc.c_emp - 1) < 1e-8);
    CHECK(sampling_constant(classical(), Region::empty()).c_emp == 0.0);
  }

  TEST_CASE("complement of a centered disk matches the incomplete gamma oracle") {
    for (std::size_t i = 0; i < 3; ++i) {
      const double radius = oracle::kOutsideDiskRadius[i];
      CAPTURE(radius);
      const SamplingConstant sc = sampling_constant(classical(), Region::complement(Region::disk(0.0, radius)));
      CHECK(std::abs(sc.c_emp - oracle::kCEmpOutsideDisk[i]) < 1e-6);
    }
    const MaskedGram g = assemble_masked(classical(), {Region::complement(Region::disk(0.0, 1.0)), 0.0, 1.0});
    for (std::size_t i = 0; i < 3; ++i) {
      const auto n = static_cast<Eigen::Index>(oracle::kDiagDegree[i]);
      CHECK(std::abs(g.m(n, n).real() - oracle::kOutsideUnitDiskDiag[i]) < 1e-8);
    }
    double off = 0;
    for (Eigen::Index j = 0; j < 21; ++j)
      for (Eigen::Index k = 0; k < 21; ++k)
        if (j != k) off = std::max(off, std::abs(g.m(j, k)));
    CHECK(off < 1e-10);
  }

  TEST_CASE("inclusion monotonicity and truncation monotonicity") {
    const Region big = Region::complement(Region::polka(0.3, 0.05));
    const Region small = Region::intersect({big, Region::halfplane(-1.0)});
    const double a = sampling_constant(classical(8), small).lambda_min;
    const double b = sampling_constant(classical(8), big).lambda_min;
    CHECK(a <= b + 1e-8);
    const Region e = Region::complement(Region::disk(0.0, 1.0));
    CHECK(sampling_constant(classical(20), e).c_emp <= sampling_constant(classical(8), e).c_emp + 1e-12);
  }

  TEST_CASE("masked area is checked against Monte Carlo") {
    TruncationOptions coarse;
    coarse.radial_panels = 2;
    coarse.panel_points = 2;
    coarse.angular_nodes = 8;
    const FockTruncation t = build_truncation(make_weight("abs2"), 2, coarse);
    CHECK(kind_of([&] { sampling_constant(t, Region::complement(Region::polka(0.3, 0.05, 0.01, 0.02))); }) ==
          ErrorKind::QuadratureUnderResolved);
  }

  TEST_CASE("non-radial weights are rejected") {
    CHECK(kind_of([] { build_truncation(make_weight("abs2_pert"), 4); }) == ErrorKind::NonRadialWeight);
  }

  TEST_CASE("p != 2 yields an upper bound") {
    const Region e = Region::complement(Region::disk(0.0, 1.0));
    const SamplingConstant sc = sampling_constant_lp(classical(8), e, 3.0, 16, 1);
    CHECK(sc.upper_bound_only);
    CHECK(sc.c_emp > 0);
    CHECK(sc.c_emp <= 1);
  }

  TEST_CASE("theorem bound evaluation") {
    const double lambdas[3] = {1, 1, 1};
    const TheoreticalBound b = theoretical_bound(0.5, 4.0, 2.0, 0.5, lambdas, std::exp(1.0));
    CHECK(b.l_eval == doctest::Approx(oracle::kTheoremExponent).epsilon(1e-14));
    CHECK(b.bound_eval == doctest::Approx(std::pow(0.5 / std::exp(1.0), oracle::kTheoremExponent)));
    CHECK_FALSE(b.base_exceeds_one);
    CHECK(theoretical_bound(0.7, 3.0, 2.0, 0.5, lambdas, 0.7).bound_eval == 1.0);
    const TheoreticalBound big_p = theoretical_bound(0.5, 4.0, 1e12, 0.5, lambdas, std::exp(1.0));
    CHECK(big_p.l_eval == doctest::Approx(16.0).epsilon(1e-9));
    CHECK(kind_of([&] { theoretical_bound(0.5, 1.0, 2.0, 0.5, lambdas, 1.0); }) == ErrorKind::InvalidArgument);
  }

  TEST_CASE("gamma experiment on the plane") {
    const std::vector<Region> family{Region::full()};
    const std::vector<cplx> probes{0.0, {1, 1}};
    const GammaExperiment ex = gamma_dependence_experiment(classical(8), family, 2.0, 2.0, probes);
    REQUIRE(ex.rows.size() == 1);
    CHECK(ex.rows[0].gamma == 1.0);
    CHECK(std::abs(ex.rows[0].c_emp - 1) < 1e-8);
  }

  TEST_CASE("ground state local norms match 1-D quadrature") {
    const FockTruncation& t = classical();
    std::vector<cplx> e0(t.dim(), 0.0);
    e0[0] = 1.0;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 2; ++j) {
        const double v = local_norm_p(t, e0, oracle::kGroundCenters[i], oracle::kGroundRadii[j], 2.0);
        CHECK(v == doctest::Approx(oracle::kGroundLocalNorm[i][j]).epsilon(1e-10));
      }
  }

  TEST_CASE("good-disk classification") {
    const FockTruncation& t = classical(8);
    const Covering cov = build_covering(t.w, {-4, -4, 4, 4}, 0.25 - 1e-6);
    const std::vector<cplx> f = random_unit_coefficients(t.dim(), 1, 0);
    GoodDiskOptions huge_k;
    huge_k.k = 1e12;
    const GoodDiskReport all = good_disk_classification(t, cov, f, 1.0, 2.0, huge_k);
    CHECK(all.good_indices.size() == cov.size());
    CHECK(all.captured_fraction >= 1.0);
    const GoodDiskReport rep = good_disk_classification(t, cov, f, 1.0, 2.0);
    CHECK(rep.t == 4.0);
    CHECK(rep.k == doctest::Approx(std::sqrt(2.0 * static_cast<double>(rep.n_overlap))));
    CHECK(rep.holds);
    for (std::size_t k : rep.good_indices) {
      const double ns = local_norm_p(t, f, cov.centers[k], cov.rho[k], 2.0);
      const double nt = local_norm_p(t, f, cov.centers[k], 4 * cov.rho[k], 2.0);
      CHECK(nt <= rep.k * rep.k * ns);
    }
    const std::vector<cplx> zero(t.dim(), 0.0);
    CHECK(kind_of([&] { good_disk_classification(t, cov, zero, 1.0, 2.0); }) == ErrorKind::InvalidArgument);
    const Covering other = build_covering(make_weight("abs2:scale=4"), {-1, -1, 1, 1}, 0.25);
    CHECK(kind_of([&] { good_disk_classification(t, other, f, 1.0, 2.0); }) == ErrorKind::CoveringWeightMismatch);
  }

  TEST_CASE("random coefficient vectors are unit and seeded") {
    const auto a = random_unit_coefficients(10, 3, 4);
    double n = 0;
    for (const cplx& c : a) n += std::norm(c);
    CHECK(n == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(a == random_unit_coefficients(10, 3, 4));
    CHECK(a != random_unit_coefficients(10, 3, 5));
  }
}
