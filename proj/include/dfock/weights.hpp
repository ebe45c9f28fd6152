#pragma once

// Doubling subharmonic weights w, their Laplacian measure mu = Lap(w) dA, and
// the metric function rho(z) defined by mu(D(z, rho(z))) = 1.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dfock/types.hpp"

namespace dfock {

struct WeightSpec {
  std::string name;
  std::function<double(cplx)> eval;
  std::function<double(cplx)> laplacian;
  /// mu(D(z,t)) when known analytically at (z,t); std::nullopt defers to quadrature.
  std::function<std::optional<double>(cplx, double)> disk_mass_closed_form;
  /// Points where the Laplacian is unbounded or undefined.
  std::vector<cplx> singular_points;

  /// Set when w(z) = radial_profile(|z|); radial_laplacian(s) is Lap(w) at |z| = s.
  std::function<double(double)> radial_profile;
  std::function<double(double)> radial_laplacian;

  /// Known global doubling constant, when one exists in closed form.
  std::optional<double> analytic_doubling_constant;

  bool is_radial() const { return static_cast<bool>(radial_profile) && static_cast<bool>(radial_laplacian); }
};

/// Corpus lookup: "abs2", "abs2:scale=k", "abs_pow:alpha=a", "abs2_pert:c=c", "re".
WeightSpec make_weight(std::string_view spec);
std::vector<std::string> weight_corpus_names();

/// Drops the closed-form and radial shortcuts so only the generic 2-D
/// quadrature path remains. Used to cross-check the fast paths.
WeightSpec without_shortcuts(WeightSpec w);

enum class MassPath { Auto, ClosedForm, Radial, Polar };

/// mu(D(z,t)) with absolute error at most tol.
double disk_mass(const WeightSpec& w, cplx z, double t, double tol = 1e-10, MassPath path = MassPath::Auto);

struct RhoOptions {
  double tol = 1e-10;      // mass tolerance, |mu(D(z,rho)) - 1| <= tol
  double rel_tol = 1e-10;  // bisection stops at relative bracket width rel_tol
  double t_max = 1e8;      // bracket expansion ceiling
};

double rho(const WeightSpec& w, cplx z, const RhoOptions& options = {});

/// min of rho over a 9x9 lattice of the rectangle plus any singular points
/// inside it. Used to size grids that must resolve the metric scale.
double rho_min_estimate(const WeightSpec& w, const Rect& domain, const RhoOptions& options = {});

struct GrowthSample {
  cplx z;
  double r = 0;       // multiplier of rho(z)
  double rho = 0;
  double mass = 0;    // mu(D^r(z))
  double ratio = 0;   // mu(D^{2r}(z)) / mu(D^r(z)) when computed
};

struct GrowthReport {
  double c_mu_estimate = 1;
  double kappa_fit = 0;
  double c_lower = 0;
  double c_upper = 0;
  double slope_low = 0;
  double slope_high = 0;
  std::vector<cplx> centers;
  std::vector<double> radii;
  std::vector<GrowthSample> samples;

  nlohmann::json to_json() const;
  static std::string csv_header();
  std::string csv_row() const;
};

/// sup over samples of mu(D(z,2r)) / mu(D(z,r)); radii are Euclidean.
GrowthReport doubling_constant(const WeightSpec& w, std::span<const cplx> centers, std::span<const double> radii,
                               double tol = 1e-10);

/// Fits kappa with r^kappa <~ mu(D^r(z)) <~ r^{1/kappa} for r > 1 (radii are
/// multipliers of rho(z)). Fills both hidden constants and c_mu_estimate on
/// the same samples.
GrowthReport growth_exponent(const WeightSpec& w, std::span<const cplx> centers, std::span<const double> radii,
                             double tol = 1e-10);

struct RhoPair {
  cplx z;
  cplx zeta;
  double r = 0;
};

struct RhoComparisonReport {
  double kappa = 0;
  double worst_ratio = 0;
  std::size_t worst_index = 0;
  std::vector<double> ratios;  // rho(z) / (rho(zeta) (1+r)^kappa)
};

RhoComparisonReport rho_comparison_check(const WeightSpec& w, std::span<const RhoPair> pairs, double kappa,
                                         const RhoOptions& options = {});

}  // namespace dfock
