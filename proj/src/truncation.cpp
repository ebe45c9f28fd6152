#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "dfock/errors.hpp"
#include "dfock/sampling.hpp"

namespace dfock {
namespace {

// Integrals of s^{2j+1} e^{-2W(s)} over [a, b] or [a, inf), scaled by
// e^{-peak} to stay representable.
struct MomentIntegrator {
  const std::function<double(double)>& profile;
  int j;
  double peak;

  double operator()(double s) const {
    if (s <= 0) return 0.0;
    return std::exp((2 * j + 1) * std::log(s) - 2 * profile(s) - peak);
  }
};

double log_density(const std::function<double(double)>& profile, int j, double s) {
  return (2 * j + 1) * std::log(s) - 2 * profile(s);
}

// Location and value of the maximum of the log integrand on a log grid.
std::pair<double, double> find_peak(const std::function<double(double)>& profile, int j) {
  double best_s = 1, best = -std::numeric_limits<double>::infinity();
  for (int k = -400; k <= 400; ++k) {
    const double s = std::pow(10.0, k / 100.0);
    const double v = log_density(profile, j, s);
    if (v > best) {
      best = v;
      best_s = s;
    }
  }
  return {best_s, best};
}

double integrate_segment(const MomentIntegrator& f, double a, double b) {
  if (!(b > a)) return 0.0;
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate(f, a, b, 1e-14);
}

double integrate_tail(const MomentIntegrator& f, double a) {
  boost::math::quadrature::exp_sinh<double> es;
  const auto shifted = [&](double x) { return f(a + x); };
  return es.integrate(shifted, 0.0, std::numeric_limits<double>::infinity(), 1e-14);
}

}  // namespace

double FockTruncation::weighted_modulus(int j, double s) const {
  if (s <= 0) return j == 0 ? std::exp(-w.radial_profile(0.0) - log_norm[0]) : 0.0;
  return std::exp(j * std::log(s) - w.radial_profile(s) - log_norm[static_cast<std::size_t>(j)]);
}

FockTruncation build_truncation(const WeightSpec& w, int n_max, const TruncationOptions& options) {
  if (!w.is_radial()) fail(ErrorKind::NonRadialWeight, "build_truncation: weight '" + w.name + "' is not radial");
  require(n_max >= 0, ErrorKind::InvalidArgument, "build_truncation: n_max must be nonnegative");
  require(options.tail_tol > 0 && options.radial_panels >= 1 && options.panel_points >= 1 &&
              options.angular_nodes >= 1,
          ErrorKind::InvalidArgument, "build_truncation: invalid quadrature options");

  FockTruncation tr;
  tr.w = w;
  tr.n_max = n_max;
  tr.options = options;

  std::vector<double> peak_s, peak_v, total;
  for (int j = 0; j <= n_max; ++j) {
    const auto [s0, v0] = find_peak(w.radial_profile, j);
    const MomentIntegrator f{w.radial_profile, j, v0};
    const double inner = integrate_segment(f, 0.0, s0);
    const double outer = integrate_tail(f, s0);
    const double q = inner + outer;
    require(std::isfinite(q) && q > 0, ErrorKind::InvalidArgument,
            "build_truncation: basis norm is not finite (weight grows too slowly)");
    tr.log_norm.push_back(0.5 * (std::log(2 * kPi) + v0 + std::log(q)));
    peak_s.push_back(s0);
    peak_v.push_back(v0);
    total.push_back(q);
  }

  const auto worst_tail = [&](double r) {
    double worst = 0;
    for (int j = 0; j <= n_max; ++j) {
      const MomentIntegrator f{w.radial_profile, j, peak_v[static_cast<std::size_t>(j)]};
      worst = std::max(worst, integrate_tail(f, r) / total[static_cast<std::size_t>(j)]);
    }
    return worst;
  };
  double hi = std::max(1.0, *std::max_element(peak_s.begin(), peak_s.end()));
  while (worst_tail(hi) >= options.tail_tol) {
    hi *= 1.5;
    require(hi < 1e6, ErrorKind::InvalidArgument, "build_truncation: no cutoff reaches the tail tolerance");
  }
  double lo = hi / 1.5;
  for (int it = 0; it < 40 && hi - lo > 1e-6 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (worst_tail(mid) < options.tail_tol ? hi : lo) = mid;
  }
  tr.r_cut = hi;
  tr.max_tail = worst_tail(hi);
  return tr;
}

nlohmann::json FockTruncation::to_json() const {
  std::vector<double> norms2;
  for (double ln : log_norm) norms2.push_back(std::exp(2 * ln));
  return {{"weight", w.name},
          {"n_max", n_max},
          {"r_cut", r_cut},
          {"max_tail", max_tail},
          {"norms_squared", norms2},
          {"radial_panels", options.radial_panels},
          {"panel_points", options.panel_points},
          {"angular_nodes", options.angular_nodes}};
}

}  // namespace dfock
