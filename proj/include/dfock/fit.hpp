#pragma once

#include <span>

namespace dfock {

struct LineFit {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
};

/// Ordinary least squares y = intercept + slope * x. Needs at least two
/// distinct abscissae; R^2 is 1 when y has zero variance.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// One constant C for the shape y <= C * x^exponent, pinned on the first
/// sample and then checked on the rest. Fitting on a single anchor keeps the
/// check meaningful: the remaining samples must respect the growth rate.
struct AnchoredPowerFit {
  double exponent = 0;
  double constant = 0;      // y[0] / x[0]^exponent
  double max_constant = 0;  // max_i y[i] / x[i]^exponent
  bool holds = false;       // y[i] <= constant * x[i]^exponent (rel. 1e-12) for all i
};

AnchoredPowerFit anchored_power_fit(std::span<const double> x, std::span<const double> y, double exponent);

}  // namespace dfock
