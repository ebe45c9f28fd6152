#pragma once

// Truncated Toeplitz operators T_v on F^2_w for piecewise-constant symbols,
// invertibility decisions and the inverse-norm bound driven by a sampling
// constant of a level set.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "dfock/regions.hpp"
#include "dfock/sampling.hpp"

namespace dfock {

/// v = inside on E, outside elsewhere; both values >= 0.
///   const(c)                     v = c
///   mix(outside,inside,<region>) two-valued symbol
struct SymbolFunction {
  Region e = Region::full();
  double outside = 0;
  double inside = 1;

  static SymbolFunction constant(double c);
  static SymbolFunction mix(double outside, double inside, const Region& e);

  double v(cplx z) const;
  double v_max() const;
  /// E_s = {v > s}.
  Region level_region(double s) const;
  PiecewiseSymbol piecewise() const { return {e, outside, inside}; }
  std::string to_string() const;
};

SymbolFunction parse_symbol(std::string_view text);

struct ToeplitzTruncation {
  Eigen::MatrixXcd t;  // int v e_j conj(e_k) e^{-2w} dA, Hermitian
  int n_max = 0;
  SymbolFunction v;
  MaskedGram quadrature;  // assembly diagnostics (its matrix equals t)
};

ToeplitzTruncation assemble_toeplitz(const FockTruncation& trunc, const SymbolFunction& v);

struct InvertibilityReport {
  std::string symbol;
  int n_max = 0;
  double lambda_min = 0;
  double lambda_max = 0;
  bool invertible = false;  // lambda_min > 1e-10 at this truncation
  double inv_norm = 0;      // 1 / lambda_min
  double v_max = 0;
  double s = 0;
  double s_prime = 0;  // s / v_max
  double c = 0;        // sampling constant of E_s fed to the bound
  std::string c_source;
  double root = 0;           // sqrt(1 - s'^2 C^2)
  double bound = 0;          // v_max / (1 - root), formula as printed
  double bound_scaled = 0;   // 1 / (v_max (1 - root))
  double slack = 0;          // bound_scaled - inv_norm
  bool holds = false;        // inv_norm <= bound_scaled
  double intermediate_lhs = 0;  // ||I - T_{v/v_max}||
  double intermediate_rhs = 0;  // root
  bool intermediate_holds = false;

  nlohmann::json to_json() const;
};

/// C defaults to c_emp(E_s) on the same truncation.
InvertibilityReport invertibility_check(const FockTruncation& trunc, const ToeplitzTruncation& t, double s,
                                        std::optional<double> c = std::nullopt);

struct LevelRow {
  double s = 0;
  double c_emp = 0;
  double bound_scaled = 0;
  bool consistent = false;  // inv_norm <= bound_scaled
};

/// Scans levels for a counterexample to the bound (a falsification search).
std::vector<LevelRow> level_ladder(const FockTruncation& trunc, const ToeplitzTruncation& t,
                                   std::span<const double> levels);

}  // namespace dfock
