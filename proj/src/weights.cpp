#include "dfock/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/quadrature/trapezoidal.hpp>

#include "dfock/errors.hpp"
#include "dfock/fit.hpp"

namespace dfock {
namespace {

using boost::math::quadrature::gauss_kronrod;
using boost::math::quadrature::tanh_sinh;

// Relative tolerance handed to the quadrature engines; the absolute budget
// from the caller is checked against their error estimates afterwards.
constexpr double kEngineRelTol = 1e-13;

// Abscissa rows are extended lazily, so each thread keeps its own engine.
tanh_sinh<double>& tanh_sinh_engine() {
  thread_local tanh_sinh<double> engine(15);
  return engine;
}

void check_budget(double value, double error, double tol, const char* where) {
  if (!std::isfinite(value) || error > tol + 1e-12 * std::abs(value)) {
    std::ostringstream os;
    os << where << ": quadrature did not converge (estimate " << value << ", error " << error << ", tol " << tol
       << ")";
    fail(ErrorKind::NonIntegrableSingularity, os.str());
  }
}

struct LaplacianGuard {
  double tol;
  double operator()(double value, cplx at) const {
    if (value < -tol) {
      std::ostringstream os;
      os << "Laplacian " << value << " at " << at.real() << "," << at.imag() << " (weight not subharmonic)";
      fail(ErrorKind::NegativeLaplacian, os.str());
    }
    return value;
  }
};

double integrate_1d(const std::function<double(double)>& f, double a, double b, double tol, const char* where) {
  if (!(b > a)) return 0.0;
  double error = 0, l1 = 0;
  const double q = tanh_sinh_engine().integrate(f, a, b, kEngineRelTol, &error, &l1);
  check_budget(q, error, tol, where);
  return q;
}

// Area measure of the circle |zeta| = s that lies inside D(z,t), |z| = d > 0.
double arc_angle(double s, double d, double t) {
  if (s <= 0) return d < t ? 2 * kPi : 0.0;
  const double c = (s * s + d * d - t * t) / (2 * s * d);
  return 2.0 * std::acos(std::clamp(c, -1.0, 1.0));
}

double radial_mass(const WeightSpec& w, cplx z, double t, double tol) {
  const LaplacianGuard guard{tol};
  const auto density = [&](double s) {
    if (s <= 0) return 0.0;
    return guard(w.radial_laplacian(s), cplx(s, 0)) * s;
  };
  const double d = std::abs(z);
  if (d <= 1e-15 * t) return 2 * kPi * integrate_1d(density, 0.0, t, tol / (2 * kPi), "radial disk mass");

  double total = 0;
  double arc_lo = d - t;
  if (t > d) {
    total += 2 * kPi * integrate_1d(density, 0.0, t - d, tol / (4 * kPi), "radial disk mass (inner)");
    arc_lo = t - d;
  }
  const auto arc = [&](double s) { return density(s) * arc_angle(s, d, t); };
  total += integrate_1d(arc, arc_lo, d + t, tol / 2, "radial disk mass (arc)");
  return total;
}

double polar_mass(const WeightSpec& w, cplx z, double t, double tol) {
  const LaplacianGuard guard{tol};
  std::vector<cplx> inside;
  for (const cplx& p : w.singular_points)
    if (std::abs(p - z) < t * (1 + 1e-12)) inside.push_back(p);
  require(inside.size() <= 1, ErrorKind::NonIntegrableSingularity,
          "more than one singular point inside the disk is not supported");

  double error = 0, l1 = 0;
  if (inside.empty()) {
    const auto ring = [&](double theta) {
      const cplx dir = std::polar(1.0, theta);
      const auto radial = [&](double rr) {
        const cplx at = z + rr * dir;
        return guard(w.laplacian(at), at) * rr;
      };
      return gauss_kronrod<double, 31>::integrate(radial, 0.0, t, 12, kEngineRelTol);
    };
    const double q = boost::math::quadrature::trapezoidal(ring, 0.0, 2 * kPi, 1e-12, 14, &error, &l1);
    check_budget(q, error, tol, "polar disk mass");
    return q;
  }

  // Polar coordinates about the singular point: the Jacobian tames an
  // integrable |zeta - p|^{alpha-2} blow-up, tanh-sinh handles the endpoint.
  const cplx p = inside.front();
  const cplx offset = p - z;
  const auto ring = [&](double theta) {
    const cplx dir = std::polar(1.0, theta);
    const double b = (offset * std::conj(dir)).real();
    const double disc = b * b + t * t - std::norm(offset);
    const double reach = -b + std::sqrt(std::max(0.0, disc));
    const auto radial = [&](double rr) {
      // below this the omitted mass is O(rr^alpha) and the Laplacian overflows
      if (rr <= 1e-150) return 0.0;
      const cplx at = p + rr * dir;
      return guard(w.laplacian(at), at) * rr;
    };
    if (reach <= 0) return 0.0;
    double e = 0, l = 0;
    return tanh_sinh_engine().integrate(radial, 0.0, reach, kEngineRelTol, &e, &l);
  };
  const double q = boost::math::quadrature::trapezoidal(ring, 0.0, 2 * kPi, 1e-12, 14, &error, &l1);
  check_budget(q, error, tol, "polar disk mass (singular)");
  return q;
}

}  // namespace

WeightSpec without_shortcuts(WeightSpec w) {
  w.disk_mass_closed_form = nullptr;
  w.radial_laplacian = nullptr;
  w.radial_profile = nullptr;
  return w;
}

double disk_mass(const WeightSpec& w, cplx z, double t, double tol, MassPath path) {
  require(t > 0, ErrorKind::InvalidArgument, "disk_mass: radius must be positive");
  require(tol > 0, ErrorKind::InvalidArgument, "disk_mass: tolerance must be positive");

  if (path == MassPath::Auto || path == MassPath::ClosedForm) {
    if (w.disk_mass_closed_form) {
      if (auto v = w.disk_mass_closed_form(z, t)) return *v;
    }
    require(path == MassPath::Auto, ErrorKind::InvalidArgument, "disk_mass: no closed form at this point");
  }
  if (path == MassPath::Auto || path == MassPath::Radial) {
    if (w.radial_laplacian) return radial_mass(w, z, t, tol);
    require(path == MassPath::Auto, ErrorKind::InvalidArgument, "disk_mass: weight has no radial Laplacian");
  }
  require(static_cast<bool>(w.laplacian), ErrorKind::InvalidArgument, "disk_mass: weight has no Laplacian");
  return polar_mass(w, z, t, tol);
}

double rho(const WeightSpec& w, cplx z, const RhoOptions& options) {
  require(options.tol > 0 && options.rel_tol > 0, ErrorKind::InvalidArgument, "rho: tolerances must be positive");
  const auto mass = [&](double t) { return disk_mass(w, z, t, options.tol); };

  double lo = 0, m_lo = 0;
  double hi = options.tol;
  double m_hi = mass(hi);
  while (m_hi < 1.0) {
    lo = hi;
    m_lo = m_hi;
    hi *= 2;
    if (hi > options.t_max) {
      std::ostringstream os;
      os << "mu(D(z,t)) = " << m_hi << " < 1 at t = " << options.t_max << " for z = " << z.real() << ","
         << z.imag();
      fail(ErrorKind::MassNeverReachesOne, os.str());
    }
    m_hi = mass(hi);
  }
  for (int it = 0; it < 200; ++it) {
    if (hi - lo <= options.rel_tol * hi && m_hi - m_lo <= options.tol) break;
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double m = mass(mid);
    if (m < 1.0) {
      lo = mid;
      m_lo = m;
    } else {
      hi = mid;
      m_hi = m;
    }
  }
  return 0.5 * (lo + hi);
}

double rho_min_estimate(const WeightSpec& w, const Rect& domain, const RhoOptions& options) {
  double best = std::numeric_limits<double>::infinity();
  const GridSpec grid{domain, 9, 9};
  for (std::size_t j = 0; j < grid.ny; ++j)
    for (std::size_t i = 0; i < grid.nx; ++i) best = std::min(best, rho(w, grid.point(i, j), options));
  for (const cplx& p : w.singular_points)
    if (domain.contains(p)) best = std::min(best, rho(w, p, options));
  return best;
}

GrowthReport doubling_constant(const WeightSpec& w, std::span<const cplx> centers, std::span<const double> radii,
                               double tol) {
  require(!centers.empty() && !radii.empty(), ErrorKind::InsufficientSamples, "doubling_constant: empty sample");
  GrowthReport report;
  report.centers.assign(centers.begin(), centers.end());
  report.radii.assign(radii.begin(), radii.end());
  for (const cplx& z : centers) {
    for (double r : radii) {
      const double m1 = disk_mass(w, z, r, tol);
      if (m1 <= tol) {
        std::ostringstream os;
        os << "mu(D(z," << r << ")) = " << m1 << " at z = " << z.real() << "," << z.imag();
        fail(ErrorKind::DivisionByZeroMass, os.str());
      }
      const double m2 = disk_mass(w, z, 2 * r, tol);
      const double ratio = m2 / m1;
      report.samples.push_back({z, r, 0.0, m1, ratio});
      report.c_mu_estimate = std::max(report.c_mu_estimate, ratio);
    }
  }
  return report;
}

GrowthReport growth_exponent(const WeightSpec& w, std::span<const cplx> centers, std::span<const double> radii,
                             double tol) {
  require(radii.size() >= 3, ErrorKind::InsufficientSamples, "growth_exponent: need at least 3 radii");
  require(!centers.empty(), ErrorKind::InsufficientSamples, "growth_exponent: need at least one center");
  for (double r : radii) require(r > 1, ErrorKind::InvalidArgument, "growth_exponent: radii must exceed 1");

  GrowthReport report;
  report.centers.assign(centers.begin(), centers.end());
  report.radii.assign(radii.begin(), radii.end());
  report.slope_low = std::numeric_limits<double>::infinity();
  report.slope_high = 0;

  RhoOptions ropt;
  ropt.tol = tol;
  std::vector<double> log_r(radii.size()), log_m(radii.size());
  for (const cplx& z : centers) {
    const double rz = rho(w, z, ropt);
    for (std::size_t i = 0; i < radii.size(); ++i) {
      const double m1 = disk_mass(w, z, radii[i] * rz, tol);
      const double m2 = disk_mass(w, z, 2 * radii[i] * rz, tol);
      require(m1 > tol, ErrorKind::DivisionByZeroMass, "growth_exponent: zero mass sample");
      report.samples.push_back({z, radii[i], rz, m1, m2 / m1});
      report.c_mu_estimate = std::max(report.c_mu_estimate, m2 / m1);
      log_r[i] = std::log(radii[i]);
      log_m[i] = std::log(m1);
    }
    const LineFit fit = fit_line(log_r, log_m);
    report.slope_low = std::min(report.slope_low, fit.slope);
    report.slope_high = std::max(report.slope_high, fit.slope);
  }

  const double admissible = std::min({report.slope_low, 1.0 / report.slope_high, 1.0});
  require(admissible > 0, ErrorKind::InvalidArgument, "growth_exponent: masses do not grow with r");
  // Largest kappa on a 1e-6 grid not exceeding the admissible value; the
  // 1e-3 grid-unit allowance absorbs regression round-off.
  report.kappa_fit = std::max(1e-6, std::floor(admissible * 1e6 + 1e-3) / 1e6);

  report.c_lower = std::numeric_limits<double>::infinity();
  report.c_upper = 0;
  for (const GrowthSample& s : report.samples) {
    report.c_lower = std::min(report.c_lower, s.mass / std::pow(s.r, report.kappa_fit));
    report.c_upper = std::max(report.c_upper, s.mass / std::pow(s.r, 1.0 / report.kappa_fit));
  }
  return report;
}

RhoComparisonReport rho_comparison_check(const WeightSpec& w, std::span<const RhoPair> pairs, double kappa,
                                         const RhoOptions& options) {
  require(!pairs.empty(), ErrorKind::InsufficientSamples, "rho_comparison_check: no pairs");
  RhoComparisonReport report;
  report.kappa = kappa;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const RhoPair& pr = pairs[i];
    const double rz = rho(w, pr.z, options);
    if (std::abs(pr.zeta - pr.z) > pr.r * rz * (1 + 1e-12)) {
      std::ostringstream os;
      os << "pair " << i << ": |zeta - z| = " << std::abs(pr.zeta - pr.z) << " exceeds r*rho(z) = " << pr.r * rz;
      fail(ErrorKind::PairOutsideDisk, os.str());
    }
    const double rzeta = rho(w, pr.zeta, options);
    const double ratio = rz / (rzeta * std::pow(1 + pr.r, kappa));
    report.ratios.push_back(ratio);
    if (ratio > report.worst_ratio) {
      report.worst_ratio = ratio;
      report.worst_index = i;
    }
  }
  return report;
}

nlohmann::json GrowthReport::to_json() const {
  nlohmann::json j;
  j["c_mu_estimate"] = c_mu_estimate;
  j["kappa_fit"] = kappa_fit;
  j["c_lower"] = c_lower;
  j["c_upper"] = c_upper;
  j["slope_low"] = slope_low;
  j["slope_high"] = slope_high;
  j["n_centers"] = centers.size();
  j["n_radii"] = radii.size();
  j["r_min"] = radii.empty() ? 0.0 : *std::min_element(radii.begin(), radii.end());
  j["r_max"] = radii.empty() ? 0.0 : *std::max_element(radii.begin(), radii.end());
  return j;
}

std::string GrowthReport::csv_header() {
  return "c_mu_estimate,kappa_fit,c_lower,c_upper,slope_low,slope_high,n_centers,n_radii,r_min,r_max";
}

std::string GrowthReport::csv_row() const {
  const nlohmann::json j = to_json();
  std::ostringstream os;
  os.precision(17);
  os << j["c_mu_estimate"].get<double>() << ',' << kappa_fit << ',' << c_lower << ',' << c_upper << ','
     << slope_low << ',' << slope_high << ',' << centers.size() << ',' << radii.size() << ','
     << j["r_min"].get<double>() << ',' << j["r_max"].get<double>();
  return os.str();
}

}  // namespace dfock
