#include <doctest.h>

#include <cmath>
#include <vector>

#include "dfock/errors.hpp"
#include "dfock/toeplitz.hpp"
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

const FockTruncation& classical() {
  static const FockTruncation t = build_truncation(make_weight("abs2"), 12);
  return t;
}

double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_SUITE("toeplitz") {
  TEST_CASE("constant symbols are multiples of the identity") {
    const auto n = static_cast<Eigen::Index>(classical().dim());
    const ToeplitzTruncation one = assemble_toeplitz(classical(), SymbolFunction::constant(1.0));
    CHECK(max_abs_diff(one.t, Eigen::MatrixXcd::Identity(n, n)) < 1e-8);
    const ToeplitzTruncation c = assemble_toeplitz(classical(), SymbolFunction::constant(0.5));
    CHECK(max_abs_diff(c.t, 0.5 * Eigen::MatrixXcd::Identity(n, n)) < 1e-8);
  }

  TEST_CASE("indicator of the outside of the unit disk is diagonal") {
    const ToeplitzTruncation t =
        assemble_toeplitz(classical(), SymbolFunction::mix(0.0, 1.0, Region::complement(Region::disk(0.0, 1.0))));
    for (std::size_t i = 0; i < 3; ++i) {
      const auto n = static_cast<Eigen::Index>(oracle::kDiagDegree[i]);
      CHECK(std::abs(t.t(n, n).real() - oracle::kOutsideUnitDiskDiag[i]) < 1e-8);
    }
  }

  TEST_CASE("scaling the symbol scales the operator") {
    const Region e = Region::complement(Region::disk({0.3, 0.1}, 0.8));
    const ToeplitzTruncation a = assemble_toeplitz(classical(), SymbolFunction::mix(0.2, 1.0, e));
    const ToeplitzTruncation b = assemble_toeplitz(classical(), SymbolFunction::mix(0.6, 3.0, e));
    CHECK(max_abs_diff(3.0 * a.t, b.t) < 1e-10);
    const InvertibilityReport ra = invertibility_check(classical(), a, 0.5);
    const InvertibilityReport rb = invertibility_check(classical(), b, 1.5);
    CHECK(rb.inv_norm == doctest::Approx(ra.inv_norm / 3).epsilon(1e-9));
    CHECK(rb.bound_scaled == doctest::Approx(ra.bound_scaled / 3).epsilon(1e-9));
  }

  TEST_CASE("constant one half with C = 1") {
    const ToeplitzTruncation t = assemble_toeplitz(classical(), SymbolFunction::constant(0.5));
    const InvertibilityReport r = invertibility_check(classical(), t, 0.5, 1.0);
    CHECK(r.root == 0.0);
    CHECK(r.bound == doctest::Approx(0.5));
    CHECK(r.bound_scaled == doctest::Approx(2.0));
    CHECK(r.inv_norm == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(r.holds);
    CHECK(r.intermediate_holds);
  }

  TEST_CASE("two-valued symbol satisfies the bound with the measured constant") {
    const SymbolFunction v = SymbolFunction::mix(0.3, 1.0, Region::complement(Region::disk(0.0, 1.0)));
    const ToeplitzTruncation t = assemble_toeplitz(classical(), v);
    const InvertibilityReport r = invertibility_check(classical(), t, 0.3);
    CHECK(r.invertible);
    CHECK(r.c_source == "auto");
    CHECK(r.holds);
    CHECK(r.intermediate_holds);
    const std::vector<double> levels{0.1, 0.2, 0.3, 0.5};
    for (const LevelRow& row : level_ladder(classical(), t, levels)) CHECK(row.consistent);
  }

  TEST_CASE("level and constant validation") {
    const ToeplitzTruncation t = assemble_toeplitz(classical(), SymbolFunction::constant(1.0));
    CHECK(kind_of([&] { invertibility_check(classical(), t, 0.0); }) == ErrorKind::InvalidLevel);
    CHECK(kind_of([&] { invertibility_check(classical(), t, 1.5); }) == ErrorKind::InvalidLevel);
    // E_s = {v > 1} is empty at s = v_max.
    CHECK(kind_of([&] { invertibility_check(classical(), t, 1.0); }) == ErrorKind::InvalidLevel);
    CHECK(kind_of([&] { invertibility_check(classical(), t, 1.0, 1.5); }) == ErrorKind::InvalidArgument);
  }

  TEST_CASE("symbol text round-trips") {
    for (const char* text : {"const(0.25)", "mix(0.3,1,complement(disk(0,0,1)))", "mix(0,2,polka(pitch=0.5,dot=0.1))"}) {
      CAPTURE(text);
      const std::string canon = parse_symbol(text).to_string();
      CHECK(parse_symbol(canon).to_string() == canon);
    }
    CHECK(parse_symbol("mix(0.3,1,disk(0,0,1))").v(0.0) == 1.0);
    CHECK(parse_symbol("mix(0.3,1,disk(0,0,1))").v(2.0) == 0.3);
    CHECK(kind_of([] { parse_symbol("mix(1,disk(0,0,1))"); }) == ErrorKind::RegionParseError);
    CHECK(kind_of([] { parse_symbol("step(1)"); }) == ErrorKind::RegionParseError);
  }
}
