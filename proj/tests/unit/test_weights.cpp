#include <doctest.h>

#include <cmath>
#include <vector>

#include "dfock/errors.hpp"
#include "dfock/fit.hpp"
#include "dfock/quadrature.hpp"
#include "dfock/rng.hpp"
#include "dfock/weights.hpp"
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

}  // namespace

TEST_SUITE("support") {
  TEST_CASE("seed derivation is deterministic and stream-separated") {
    CHECK(derive_seed(1, Stream::Density, 0) == derive_seed(1, Stream::Density, 0));
    CHECK(derive_seed(1, Stream::Density, 0) != derive_seed(1, Stream::Density, 1));
    CHECK(derive_seed(1, Stream::Density, 0) != derive_seed(1, Stream::RemezPoints, 0));
    CHECK(derive_seed(1, Stream::Density, 0) != derive_seed(2, Stream::Density, 0));
    Rng a = make_rng(7, Stream::TestFunctions, 3);
    Rng b = make_rng(7, Stream::TestFunctions, 3);
    for (int i = 0; i < 10; ++i) {
      const double u = uniform01(a);
      CHECK(u == uniform01(b));
      CHECK(u >= 0.0);
      CHECK(u < 1.0);
    }
  }

  TEST_CASE("line fit recovers an exact line") {
    const std::vector<double> x{0, 1, 2, 3};
    const std::vector<double> y{1, 3, 5, 7};
    const LineFit f = fit_line(x, y);
    CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(f.intercept == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-14));
  }

  TEST_CASE("anchored power fit pins the first sample") {
    const std::vector<double> x{1, 2, 4};
    const std::vector<double> y{2, 1, 0.5};
    const AnchoredPowerFit f = anchored_power_fit(x, y, -1.0);
    CHECK(f.constant == doctest::Approx(2.0));
    CHECK(f.holds);
    const std::vector<double> y_bad{2, 1.5, 0.5};
    CHECK_FALSE(anchored_power_fit(x, y_bad, -1.0).holds);
  }

  TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
    const QuadratureRule q = gauss_legendre(8, 0.0, 2.0);
    double s = 0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) s += q.weights[i] * std::pow(q.nodes[i], 15);
    CHECK(s == doctest::Approx(std::pow(2.0, 16) / 16).epsilon(1e-13));
    const QuadratureRule c = composite_gauss_legendre({0.0, 1.0, 0.5, 1.0}, 4);
    CHECK(c.nodes.size() == 8);
  }
}

TEST_SUITE("weights") {
  TEST_CASE("rho of the classical weight is 1/(2 sqrt(pi)) everywhere") {
    const WeightSpec w = make_weight("abs2");
    for (cplx z : {cplx(0, 0), cplx(3, -2), cplx(-7.5, 0.25)}) CHECK(std::abs(rho(w, z) - oracle::kRhoAbs2) < 1e-10);
    const WeightSpec no_shortcut = without_shortcuts(w);
    CHECK(std::abs(rho(no_shortcut, {1.5, -0.5}) - oracle::kRhoAbs2) < 1e-10);
  }

  TEST_CASE("rho at the origin for |z|^alpha") {
    CHECK(std::abs(rho(make_weight("abs_pow:alpha=1"), 0.0) - oracle::kRhoAbsPow1) < 1e-8);
    CHECK(std::abs(rho(make_weight("abs_pow:alpha=3"), 0.0) - oracle::kRhoAbsPow3) < 1e-8);
    CHECK(std::abs(rho(make_weight("abs_pow:alpha=0.5"), 0.0) - oracle::kRhoAbsPowHalf) < 1e-8);
  }

  TEST_CASE("mass paths agree") {
    const WeightSpec w = make_weight("abs2:scale=4");
    const cplx z{1.0, 0.5};
    const double closed = disk_mass(w, z, 0.7, 1e-12, MassPath::ClosedForm);
    CHECK(closed == doctest::Approx(16 * kPi * 0.49).epsilon(1e-14));
    CHECK(std::abs(disk_mass(w, z, 0.7, 1e-10, MassPath::Polar) - closed) < 1e-9);
    CHECK(std::abs(disk_mass(w, z, 0.7, 1e-10, MassPath::Radial) - closed) < 1e-9);
    const WeightSpec a = without_shortcuts(make_weight("abs_pow:alpha=0.5"));
    // Singular point inside the disk: integrable, mass 2 pi alpha t^alpha about 0.
    CHECK(std::abs(disk_mass(a, 0.0, 0.3, 1e-10, MassPath::Polar) - kPi * std::sqrt(0.3)) < 1e-8);
  }

  TEST_CASE("growth law of the classical weight") {
    const WeightSpec w = make_weight("abs2");
    const std::vector<cplx> centers{0.0, {2, 1}, {-3, 4}};
    const std::vector<double> radii{1.5, 2, 4, 8};
    const GrowthReport g = growth_exponent(w, centers, radii);
    for (const GrowthSample& s : g.samples) CHECK(std::abs(s.mass - s.r * s.r) <= 1e-6 * s.r * s.r);
    CHECK(g.kappa_fit == 0.5);
    CHECK(g.c_mu_estimate == doctest::Approx(4.0).epsilon(1e-8));
  }

  TEST_CASE("weight errors") {
    CHECK(kind_of([] { make_weight("nope"); }) == ErrorKind::UnknownWeight);
    CHECK(kind_of([] { make_weight("abs2:bogus=1"); }) == ErrorKind::UnknownWeight);
    CHECK(kind_of([] { rho(make_weight("re"), 0.0); }) == ErrorKind::MassNeverReachesOne);
    const WeightSpec w = make_weight("abs2");
    const std::vector<cplx> c{0.0};
    const std::vector<double> small{0.5, 2, 4};
    CHECK(kind_of([&] { growth_exponent(w, c, small); }) == ErrorKind::InvalidArgument);
    const std::vector<double> two{2, 4};
    CHECK(kind_of([&] { growth_exponent(w, c, two); }) == ErrorKind::InsufficientSamples);
  }

  TEST_CASE("rho comparison on the classical weight") {
    const WeightSpec w = make_weight("abs2");
    const std::vector<RhoPair> pairs{{0.0, {0.1, 0}, 1.0}, {{1, 1}, {1.2, 0.9}, 2.0}};
    const RhoComparisonReport rep = rho_comparison_check(w, pairs, 0.5);
    for (double r : rep.ratios) CHECK(r <= 1.0);
    const std::vector<RhoPair> far{{0.0, {5, 0}, 1.0}};
    CHECK(kind_of([&] { rho_comparison_check(w, far, 0.5); }) == ErrorKind::PairOutsideDisk);
  }

  TEST_CASE("corpus entries parse") {
    for (const std::string& name : weight_corpus_names()) {
      CAPTURE(name);
      CHECK_NOTHROW(make_weight(name));
    }
  }
}
