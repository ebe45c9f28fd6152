#pragma once

// Random-search lower bounds for the planar Remez constant on a disk and a
// direct check of the Kovrijkine-type local estimate on adapted disks.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "dfock/regions.hpp"
#include "dfock/types.hpp"

namespace dfock {

enum class PolynomialFamily { Gaussian, MonomialShift, BoundaryRoot, ChebyshevDiameter };

const char* to_string(PolynomialFamily f) noexcept;

/// Polynomial in the local variable u = (z - G.center) / G.radius.
struct PolynomialSample {
  int degree = 0;
  std::vector<cplx> coefficients;  // ascending, length degree + 1
  PolynomialFamily family = PolynomialFamily::Gaussian;
  std::uint64_t trial = 0;
  double scale = 1;  // lambda applied so |{|lambda p| <= 1}| >= s

  cplx operator()(cplx u) const;
};

/// Trial t of degree n: families cycle with t mod 6 (three Gaussian draws,
/// then a shifted monomial, a monomial with its root on the circle, and a
/// Chebyshev product on a random diameter). Depends only on (seed, n, t).
PolynomialSample draw_polynomial(int n, std::uint64_t trial, std::uint64_t seed);

struct RemezOptions {
  std::size_t mc_points = 100000;
  std::size_t boundary_points = 4096;
  std::uint64_t seed = 1;
  bool keep_ratios = false;
};

struct RemezReport {
  Disk g;
  double s = 0;
  double s_frac = 0;  // s / |G|
  int n = 0;
  std::size_t trials = 0;
  double max_ratio = 0;     // largest sup_{dG} |lambda p|
  double fitted_c = 0;      // smallest c with max_ratio <= (c radius^2 / s)^n; 0 for n = 0
  double median_ratio = 0;
  PolynomialFamily worst_family = PolynomialFamily::Gaussian;
  std::uint64_t worst_trial = 0;
  std::vector<double> ratios;  // per trial when requested

  nlohmann::json to_json() const;
};

/// One (n, s) cell.
RemezReport remez_probe(const Disk& g, int n, double s, std::size_t trials, const RemezOptions& options = {});

struct RemezExperiment {
  std::vector<RemezReport> cells;  // degree-major, s_fracs in the given order
  double fitted_c = 0;             // one constant for every cell
  bool holds = false;              // max_ratio <= (fitted_c radius^2/s)^n in every cell
  bool monotone_in_s = false;      // max_ratio nonincreasing in s at each degree
};

/// All cells of a degree x s-fraction grid. Every s-fraction reuses the same
/// polynomials (matched seeds), so a single evaluation pass serves a degree.
RemezExperiment remez_experiment(const Disk& g, std::span<const int> degrees, std::span<const double> s_fracs,
                                 std::size_t trials, const RemezOptions& options = {});

struct KovrijkineInput {
  std::function<cplx(cplx)> f;
  cplx w;                 // center of the adapted disks
  double rho_w = 0;       // rho(w)
  double r = 0;           // inner multiplier
  double big_r = 0;       // outer multiplier R > r
  Region e = Region::full();  // intersected with D^r(w) internally
  double p_exp = 2;
  double c = kPi;         // Remez-type constant of the base
  double c2 = 1;          // c'' in the eta bound
  std::size_t radial_nodes = 128;
  std::size_t angular_nodes = 256;
  std::size_t boundary_points = 4096;
};

struct KovrijkineReport {
  double sup_small = 0;  // sup_{D^r} |f|
  double sup_e = 0;      // sup_E |f|
  double big_m = 0;      // sup_{D^R} |f| (boundary circle)
  double area_e = 0;
  double eta = 0;
  double base = 0;  // c r^2 rho^2 / |E|
  double rhs_sup = 0;
  double slack_sup = 0;  // rhs_sup - sup_small
  double lp_small = 0;   // ||f||_{L^p(D^r)}
  double lp_e = 0;
  double rhs_lp = 0;
  double slack_lp = 0;
  double c2_needed = 0;  // smallest c'' making the sup form hold
  bool holds_sup = false;
  bool holds_lp = false;

  nlohmann::json to_json() const;
};

KovrijkineReport kovrijkine_check(const KovrijkineInput& in);

}  // namespace dfock
