#include <doctest.h>

#include <cmath>
#include <vector>

#include "dfock/covering.hpp"
#include "dfock/errors.hpp"
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

const Covering& small_covering() {
  static const Covering cov = build_covering(make_weight("abs2"), {-2, -2, 2, 2}, 0.25 - 1e-6);
  return cov;
}

}  // namespace

TEST_SUITE("covering") {
  TEST_CASE("greedy net is separated and covers at r0_effective") {
    const Covering& cov = small_covering();
    REQUIRE(cov.size() > 0);
    CHECK(cov.r0_effective > 0);
    CHECK(cov.r0_effective < 1.0);
    CHECK(uncovered_count(cov, cov.r0_effective, {cov.domain, 120, 120}) == 0);
    // No center lies in another center's delta disk.
    CHECK(min_separation_ratio(cov) >= cov.delta * (1 - 1e-9));
    CHECK(min_separation_ratio(cov) < 2 * cov.delta);
    for (double r : cov.rho) CHECK(std::abs(r - oracle::kRhoAbs2) < 1e-9);
  }

  TEST_CASE("covering CSV has one row per center") {
    const Covering& cov = small_covering();
    const std::string csv = cov.csv();
    std::size_t lines = 0;
    for (char ch : csv) lines += ch == '\n';
    CHECK(lines == cov.size() + 1);
    CHECK(csv.rfind("k,re,im,rho\n", 0) == 0);
  }

  TEST_CASE("overlap grows at most like (1+s)^{1+1/kappa+eps}") {
    // Near s = 1 the local slope of s^2 against 1+s is 4; the ladder needs its full range.
    const Covering cov = build_covering(make_weight("abs2"), {-4, -4, 4, 4}, 0.25 - 1e-6);
    const std::vector<double> s{1, 2, 4, 8};
    const OverlapLadder ladder = overlap_ladder(cov, s, 60, 0.5, 0.3);
    CHECK(ladder.holds);
    CHECK(ladder.fitted_exponent < 3.1);
    for (const OverlapReport& r : ladder.rungs)
      CHECK(static_cast<double>(r.n_measured) <= ladder.c_ov_fit * std::pow(1 + r.s, r.bound_exponent) * (1 + 1e-12));
    for (std::size_t i = 1; i < ladder.rungs.size(); ++i)
      CHECK(ladder.rungs[i].n_measured >= ladder.rungs[i - 1].n_measured);
  }

  TEST_CASE("cardinality in a disk counts centers") {
    const Covering& cov = small_covering();
    const WeightSpec w = make_weight("abs2");
    const CardinalityReport c = cardinality_in_disk(cov, w, 0.0, 2.0);
    CHECK(c.count > 0);
    CHECK_FALSE(c.boundary_truncated);
    CHECK(cardinality_in_disk(cov, w, {1.9, 1.9}, 2.0).boundary_truncated);
  }

  TEST_CASE("summability decays and rejects small exponents") {
    const Covering& cov = small_covering();
    const WeightSpec w = make_weight("abs2");
    const SummabilityReport a = summability_sum(cov, w, 0.0, 1.0, 4.0, 0.5);
    const SummabilityReport b = summability_sum(cov, w, 0.0, 2.0, 4.0, 0.5);
    CHECK(a.sum_value > b.sum_value);
    CHECK(a.bound_exponent == doctest::Approx(-2.0 / 3.0));
    CHECK(kind_of([&] { summability_sum(cov, w, 0.0, 1.0, 3.0, 0.5); }) == ErrorKind::ExponentTooSmall);
    CHECK(kind_of([&] { summability_sum(cov, w, 0.0, 0.5, 4.0, 0.5); }) == ErrorKind::InvalidArgument);
  }

  TEST_CASE("harmonic approximation of the classical weight") {
    const WeightSpec w = make_weight("abs2");
    for (double sigma : {1.0, 2.0, 4.0}) {
      const HarmonicApprox h = harmonic_approximation(w, {0.7, -0.3}, sigma);
      CHECK(std::abs(h.a_sigma - sigma * sigma / (4 * kPi)) < 1e-6);
    }
  }

  TEST_CASE("harmonic weight is its own approximation") {
    const HarmonicApprox h = harmonic_approximation_at_scale(make_weight("re"), {1, 2}, 2.0, 1.0);
    CHECK(h.a_sigma <= 1e-10);
    CHECK(kind_of([] { harmonic_approximation(make_weight("re"), 0.0, 1.0); }) == ErrorKind::MassNeverReachesOne);
  }
}
