#include "dfock/fit.hpp"

#include <algorithm>
#include <cmath>

#include "dfock/errors.hpp"

namespace dfock {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), ErrorKind::InvalidArgument, "fit_line: size mismatch");
  require(x.size() >= 2, ErrorKind::InsufficientSamples, "fit_line: need at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  require(sxx > 0, ErrorKind::InsufficientSamples, "fit_line: abscissae are all equal");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

AnchoredPowerFit anchored_power_fit(std::span<const double> x, std::span<const double> y, double exponent) {
  require(x.size() == y.size() && !x.empty(), ErrorKind::InvalidArgument, "anchored_power_fit: bad sizes");
  AnchoredPowerFit fit;
  fit.exponent = exponent;
  fit.constant = y[0] / std::pow(x[0], exponent);
  fit.holds = true;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double c = y[i] / std::pow(x[i], exponent);
    fit.max_constant = std::max(fit.max_constant, c);
    if (c > fit.constant * (1.0 + 1e-12)) fit.holds = false;
  }
  return fit;
}

}  // namespace dfock
