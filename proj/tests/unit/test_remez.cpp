#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "dfock/errors.hpp"
#include "dfock/remez.hpp"

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

RemezOptions small_options(std::uint64_t seed = 1) {
  RemezOptions o;
  o.mc_points = 20000;
  o.boundary_points = 1024;
  o.seed = seed;
  o.keep_ratios = true;
  return o;
}

}  // namespace

TEST_SUITE("remez") {
  TEST_CASE("degree zero has ratio exactly one") {
    const RemezReport r = remez_probe({0.0, 1.0}, 0, 0.5, 50, small_options());
    CHECK(r.max_ratio == 1.0);
    for (double x : r.ratios) CHECK(x == 1.0);
  }

  TEST_CASE("polynomial families") {
    CHECK(draw_polynomial(3, 0, 1).family == PolynomialFamily::Gaussian);
    CHECK(draw_polynomial(3, 3, 1).family == PolynomialFamily::MonomialShift);
    CHECK(draw_polynomial(3, 4, 1).family == PolynomialFamily::BoundaryRoot);
    CHECK(draw_polynomial(3, 5, 1).family == PolynomialFamily::ChebyshevDiameter);
    const PolynomialSample p = draw_polynomial(4, 4, 9);
    CHECK(p.coefficients.size() == 5);
    // (u - e^{i phi})^4 vanishes on the unit circle at its root
    const cplx root = -p.coefficients[3] / 4.0;
    CHECK(std::abs(std::abs(root) - 1) < 1e-12);
    CHECK(std::abs(p(root)) < 1e-12);
    CHECK(draw_polynomial(4, 7, 9).coefficients == draw_polynomial(4, 7, 9).coefficients);
  }

  TEST_CASE("a single constant bounds every cell and ratios fall with s") {
    const std::vector<int> degrees{0, 1, 2, 4};
    const std::vector<double> fracs{0.1, 0.25, 0.5, 0.9};
    const RemezExperiment ex = remez_experiment({0.0, 1.0}, degrees, fracs, 300, small_options());
    CHECK(ex.holds);
    CHECK(ex.monotone_in_s);
    CHECK(ex.fitted_c > 0);
    CHECK(ex.cells.size() == degrees.size() * fracs.size());
  }

  TEST_CASE("homothety invariance") {
    const std::vector<int> degrees{3};
    const std::vector<double> fracs{0.25};
    const RemezExperiment a = remez_experiment({0.0, 1.0}, degrees, fracs, 200, small_options());
    const RemezExperiment b = remez_experiment({{3, -2}, 2.5}, degrees, fracs, 200, small_options());
    CHECK(a.cells[0].ratios == b.cells[0].ratios);
    CHECK(a.cells[0].fitted_c == doctest::Approx(b.cells[0].fitted_c).epsilon(1e-12));
    // Independent seeds: medians agree within Monte Carlo error.
    const RemezExperiment c = remez_experiment({{3, -2}, 2.5}, degrees, fracs, 600, small_options(77));
    const RemezExperiment d = remez_experiment({0.0, 1.0}, degrees, fracs, 600, small_options(78));
    const double m1 = c.cells[0].median_ratio, m2 = d.cells[0].median_ratio;
    CHECK(std::abs(std::log(m1 / m2)) < 0.15);
  }

  TEST_CASE("infeasible measure targets") {
    CHECK(kind_of([] { remez_probe({0.0, 1.0}, 2, kPi, 10, small_options()); }) ==
          ErrorKind::MeasureTargetInfeasible);
    const std::vector<int> degrees{1};
    const std::vector<double> fracs{1.0};
    CHECK(kind_of([&] { remez_experiment({0.0, 1.0}, degrees, fracs, 10, small_options()); }) ==
          ErrorKind::MeasureTargetInfeasible);
  }
}

TEST_SUITE("kovrijkine") {
  TEST_CASE("constant function on the full disk") {
    KovrijkineInput in;
    in.f = [](cplx) { return cplx(1.0, 0.0); };
    in.w = 0.0;
    in.rho_w = 0.5;
    in.r = 1;
    in.big_r = 2;
    const KovrijkineReport rep = kovrijkine_check(in);
    CHECK(rep.sup_small == 1.0);
    CHECK(rep.big_m == 1.0);
    CHECK(rep.holds_sup);
    // L^p form at c = pi is an equality up to quadrature
    CHECK(rep.holds_lp);
    CHECK(rep.base == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("polynomial on a half disk") {
    KovrijkineInput in;
    in.f = [](cplx z) { return 1.0 + 2.0 * z * z; };
    in.w = 0.0;
    in.rho_w = 1.0;
    in.r = 1;
    in.big_r = 2;
    in.e = Region::halfplane(0.2);
    const KovrijkineReport rep = kovrijkine_check(in);
    CHECK(rep.sup_e <= rep.sup_small);
    CHECK(rep.big_m >= rep.sup_small);
    CHECK(rep.c2_needed >= 0);
    in.c2 = std::max(rep.c2_needed, 1e-3) * 1.01;
    CHECK(kovrijkine_check(in).holds_sup);
  }

  TEST_CASE("hypothesis sup >= 1 is enforced") {
    KovrijkineInput in;
    in.f = [](cplx) { return cplx(0.5, 0.0); };
    in.rho_w = 1;
    in.r = 1;
    in.big_r = 2;
    CHECK(kind_of([&] { kovrijkine_check(in); }) == ErrorKind::HypothesisUnsatisfied);
  }
}
