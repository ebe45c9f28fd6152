#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "dfock/covering.hpp"
#include "dfock/errors.hpp"
#include "dfock/fit.hpp"
#include "dfock/kernels.hpp"

namespace dfock {
namespace {

// Bucket grid used while the net is growing.
class GrowingIndex {
 public:
  GrowingIndex(const Rect& box, double cell) : box_(box), cell_(cell) {
    nx_ = static_cast<std::size_t>(std::floor(box.width() / cell)) + 1;
    ny_ = static_cast<std::size_t>(std::floor(box.height() / cell)) + 1;
    buckets_.resize(nx_ * ny_);
  }

  void insert(std::uint32_t k, cplx c) { buckets_[cell_of(c)].push_back(k); }

  template <class F>
  bool any_in_box(cplx c, double half, F&& pred) const {
    const std::size_t i0 = ix(c.real() - half), i1 = ix(c.real() + half);
    const std::size_t j0 = iy(c.imag() - half), j1 = iy(c.imag() + half);
    for (std::size_t j = j0; j <= j1; ++j)
      for (std::size_t i = i0; i <= i1; ++i)
        for (std::uint32_t k : buckets_[j * nx_ + i])
          if (pred(k)) return true;
    return false;
  }

 private:
  std::size_t ix(double x) const {
    return static_cast<std::size_t>(std::clamp(std::floor((x - box_.x0) / cell_), 0.0, double(nx_ - 1)));
  }
  std::size_t iy(double y) const {
    return static_cast<std::size_t>(std::clamp(std::floor((y - box_.y0) / cell_), 0.0, double(ny_ - 1)));
  }
  std::size_t cell_of(cplx c) const { return iy(c.imag()) * nx_ + ix(c.real()); }

  Rect box_;
  double cell_;
  std::size_t nx_ = 0, ny_ = 0;
  std::vector<std::vector<std::uint32_t>> buckets_;
};

// min_k |p - a_k| / rho_k, exact: the window grows until it contains every
// center that could beat the current best.
double min_scaled_distance(const Covering& cov, cplx p, double start_half) {
  const auto& k = kernels::active();
  double half = start_half;
  for (;;) {
    double best2 = std::numeric_limits<double>::infinity();
    cov.index.for_each_span(p.real() - half, p.imag() - half, p.real() + half, p.imag() + half,
                            [&](std::uint32_t b, std::uint32_t e) {
                              best2 = std::min(best2, k.min_scaled_dist2(p.real(), p.imag(), cov.index.cx() + b,
                                                                         cov.index.cy() + b,
                                                                         cov.index.inv_rho2() + b, e - b));
                            });
    const double best = std::sqrt(best2);
    const double reach = best * cov.rho_max;
    if (std::isfinite(best) && reach <= half) return best;
    const double span = std::max(cov.domain.width(), cov.domain.height()) + 2 * cov.rho_max;
    if (half > span * 4) return best;
    half = std::isfinite(best) ? std::max(reach, 2 * half) : 2 * half;
  }
}

std::size_t count_at(const Covering& cov, cplx p, double s) {
  const auto& k = kernels::active();
  const double half = s * cov.rho_max;
  std::size_t count = 0;
  cov.index.for_each_span(p.real() - half, p.imag() - half, p.real() + half, p.imag() + half,
                          [&](std::uint32_t b, std::uint32_t e) {
                            count += k.count_in_disks(p.real(), p.imag(), cov.index.cx() + b, cov.index.cy() + b,
                                                      cov.index.rho2() + b, s * s, e - b);
                          });
  return count;
}

}  // namespace

Covering build_covering(const WeightSpec& w, const Rect& domain, double delta, const CoveringOptions& options) {
  require(domain.valid(), ErrorKind::DomainTooSmall, "build_covering: domain rectangle is empty");
  require(delta > 0 && delta <= 0.5, ErrorKind::InvalidArgument, "build_covering: delta must lie in (0, 1/2]");

  Covering cov;
  cov.weight_name = w.name;
  cov.delta = delta;
  cov.domain = domain;

  const double rho_est = rho_min_estimate(w, domain, options.rho);
  const double pitch = delta * rho_est / 4;
  const auto steps = [&](double len) {
    return len > 0 ? static_cast<std::size_t>(std::ceil(len / pitch)) + 1 : std::size_t{1};
  };
  const std::size_t nx = steps(domain.width()), ny = steps(domain.height());
  require(static_cast<double>(nx) * static_cast<double>(ny) <= static_cast<double>(options.max_candidates),
          ErrorKind::InvalidArgument, "build_covering: domain too large for the candidate budget");
  const double hx = nx > 1 ? domain.width() / static_cast<double>(nx - 1) : 0.0;
  const double hy = ny > 1 ? domain.height() / static_cast<double>(ny - 1) : 0.0;
  cov.candidate_pitch = std::max(hx, hy);
  cov.candidates = nx * ny;
  const GridSpec lattice{domain, nx, ny};

  GrowingIndex grid(domain, std::max(delta * rho_est, 1e-300));
  double rho_max = 0;
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const cplx c = lattice.point(i, j);
      const auto near_own = [&](std::uint32_t k) { return std::abs(c - cov.centers[k]) < delta * cov.rho[k]; };
      if (grid.any_in_box(c, delta * rho_max, near_own)) continue;
      const double rc = rho(w, c, options.rho);
      const auto near_new = [&](std::uint32_t k) { return std::abs(c - cov.centers[k]) < delta * rc; };
      if (grid.any_in_box(c, delta * rc, near_new)) continue;
      grid.insert(static_cast<std::uint32_t>(cov.centers.size()), c);
      cov.centers.push_back(c);
      cov.rho.push_back(rc);
      rho_max = std::max(rho_max, rc);
    }
  }
  require(!cov.centers.empty(), ErrorKind::DomainTooSmall, "build_covering: no admissible center");

  cov.rho_min = *std::min_element(cov.rho.begin(), cov.rho.end());
  cov.rho_max = rho_max;
  cov.index = CenterIndex(cov.centers, cov.rho, std::max(delta * cov.rho_min, 1e-300));

  // Every domain point is within half a lattice diagonal of a candidate.
  double worst = 0;
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i)
      worst = std::max(worst, min_scaled_distance(cov, lattice.point(i, j), delta * rho_max + cov.candidate_pitch));
  const double slack = 0.5 * std::hypot(hx, hy) / cov.rho_min;
  cov.r0_effective = std::max((worst + slack) * (1 + 1e-9), 1e-12);
  return cov;
}

std::size_t uncovered_count(const Covering& cov, double s, const GridSpec& probes) {
  std::size_t missing = 0;
  for (std::size_t j = 0; j < probes.ny; ++j)
    for (std::size_t i = 0; i < probes.nx; ++i)
      if (count_at(cov, probes.point(i, j), s) == 0) ++missing;
  return missing;
}

double min_separation_ratio(const Covering& cov) {
  double best = std::numeric_limits<double>::infinity();
  const double half = 2 * cov.rho_max;
  for (std::size_t a = 0; a < cov.size(); ++a) {
    const cplx p = cov.centers[a];
    cov.index.for_each_span(p.real() - half, p.imag() - half, p.real() + half, p.imag() + half,
                            [&](std::uint32_t b, std::uint32_t e) {
                              for (std::uint32_t s = b; s < e; ++s) {
                                const std::uint32_t k = cov.index.original(s);
                                if (k == a) continue;
                                const double d = std::abs(p - cov.centers[k]);
                                best = std::min(best, d / std::max(cov.rho[a], cov.rho[k]));
                              }
                            });
  }
  return best;
}

std::string Covering::csv() const {
  std::string out = "k,re,im,rho\n";
  char buf[160];
  for (std::size_t k = 0; k < centers.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", k, centers[k].real(), centers[k].imag(), rho[k]);
    out += buf;
  }
  return out;
}

nlohmann::json Covering::summary_json() const {
  return {{"weight", weight_name},
          {"n_centers", centers.size()},
          {"delta", delta},
          {"domain", {domain.x0, domain.y0, domain.x1, domain.y1}},
          {"r0_effective", r0_effective},
          {"candidate_pitch", candidate_pitch},
          {"candidates", candidates},
          {"rho_min", rho_min},
          {"rho_max", rho_max}};
}

GridSpec interior_probe_grid(const Covering& cov, double s, std::size_t n) {
  const Rect inner = cov.domain.shrunk(s * cov.rho_max);
  if (!inner.valid()) return {inner, 0, 0};
  return {inner, n, n};
}

OverlapReport overlap_count(const Covering& cov, double s, const GridSpec& probes, double kappa, double epsilon) {
  require(probes.size() > 0 && probes.box.valid(), ErrorKind::EmptyGrid, "overlap_count: empty probe grid");
  require(s > 0, ErrorKind::InvalidArgument, "overlap_count: s must be positive");
  require(kappa > 0 && epsilon > 0, ErrorKind::InvalidArgument, "overlap_count: kappa and epsilon must be positive");
  OverlapReport rep;
  rep.s = s;
  rep.kappa = kappa;
  rep.epsilon = epsilon;
  rep.bound_exponent = 1 + 1 / kappa + kappa * epsilon / (1 + kappa);
  double total = 0;
  for (std::size_t j = 0; j < probes.ny; ++j) {
    for (std::size_t i = 0; i < probes.nx; ++i) {
      const std::size_t c = count_at(cov, probes.point(i, j), s);
      rep.n_measured = std::max(rep.n_measured, c);
      total += static_cast<double>(c);
    }
  }
  rep.probes = probes.size();
  rep.mean_count = total / static_cast<double>(probes.size());
  rep.c_ov_fit = static_cast<double>(rep.n_measured) / std::pow(1 + s, rep.bound_exponent);
  return rep;
}

OverlapLadder overlap_ladder(const Covering& cov, std::span<const double> s_values, std::size_t probe_n, double kappa,
                             double epsilon) {
  require(!s_values.empty(), ErrorKind::InsufficientSamples, "overlap_ladder: empty s ladder");
  OverlapLadder ladder;
  std::vector<double> x, y;
  for (double s : s_values) {
    ladder.rungs.push_back(overlap_count(cov, s, interior_probe_grid(cov, s, probe_n), kappa, epsilon));
    x.push_back(1 + s);
    y.push_back(static_cast<double>(ladder.rungs.back().n_measured));
  }
  // Smallest single constant covering every rung; the growth rate is the
  // least-squares slope of log n against log(1+s).
  const double exponent = ladder.rungs.front().bound_exponent;
  for (std::size_t i = 0; i < x.size(); ++i) ladder.c_ov_fit = std::max(ladder.c_ov_fit, y[i] / std::pow(x[i], exponent));
  if (x.size() >= 2) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(std::max(y[i], 1.0)));
    }
    ladder.fitted_exponent = fit_line(lx, ly).slope;
  }
  ladder.holds = ladder.fitted_exponent <= exponent;
  return ladder;
}

CardinalityReport cardinality_in_disk(const Covering& cov, const WeightSpec& w, cplx z, double s,
                                      const RhoOptions& options) {
  require(s > 1, ErrorKind::InvalidArgument, "cardinality_in_disk: s must exceed 1");
  CardinalityReport rep;
  const double radius = s * rho(w, z, options);
  const double r2 = radius * radius;
  cov.index.for_each_span(z.real() - radius, z.imag() - radius, z.real() + radius, z.imag() + radius,
                          [&](std::uint32_t b, std::uint32_t e) {
                            for (std::uint32_t k = b; k < e; ++k) {
                              const double dx = cov.index.cx()[k] - z.real();
                              const double dy = cov.index.cy()[k] - z.imag();
                              if (dx * dx + dy * dy < r2) ++rep.count;
                            }
                          });
  rep.boundary_truncated = !(cov.domain.inner_distance(z) >= radius);
  return rep;
}

SummabilityReport summability_sum(const Covering& cov, const WeightSpec& w, cplx z, double r, double m, double kappa,
                                  const RhoOptions& options) {
  require(kappa > 0, ErrorKind::InvalidArgument, "summability_sum: kappa must be positive");
  if (!(m > 1 + 1 / kappa)) {
    std::ostringstream os;
    os << "m = " << m << " must exceed 1 + 1/kappa = " << 1 + 1 / kappa;
    fail(ErrorKind::ExponentTooSmall, os.str());
  }
  require(r >= 1, ErrorKind::InvalidArgument, "summability_sum: r must be at least 1");

  SummabilityReport rep;
  rep.z = z;
  rep.r = r;
  rep.m = m;
  rep.kappa = kappa;
  rep.bound_exponent = 1 / kappa - m / (1 + kappa);

  const double cut = r * rho(w, z, options);
  for (std::size_t k = 0; k < cov.size(); ++k) {
    const double d = std::abs(cov.centers[k] - z);
    if (d < cut) continue;
    rep.sum_value += std::pow(cov.rho[k] / d, m);
    ++rep.terms;
  }

  // Exterior of the domain: centers at number density ~ D/rho^2, each
  // contributing (rho/|zeta - z|)^m, integrated over |zeta - z| > dist.
  const double dist = cov.domain.inner_distance(z);
  if (m <= 2 || dist <= 0) {
    rep.truncation_tail_bound = std::numeric_limits<double>::infinity();
    return rep;
  }
  double packed = 0;
  for (double rk : cov.rho) packed += rk * rk;
  const double area = std::max(cov.domain.area(), cov.rho_max * cov.rho_max);
  const double density = packed / area;
  double rho_b = 0;
  const Rect& d = cov.domain;
  for (int i = 0; i <= 16; ++i) {
    const double t = i / 16.0;
    for (const cplx p : {cplx(d.x0 + t * d.width(), d.y0), cplx(d.x0 + t * d.width(), d.y1),
                         cplx(d.x0, d.y0 + t * d.height()), cplx(d.x1, d.y0 + t * d.height())})
      rho_b = std::max(rho_b, rho(w, p, options));
  }
  rep.truncation_tail_bound = density * 2 * kPi * std::pow(rho_b, m - 2) * std::pow(dist, 2 - m) / (m - 2);
  return rep;
}

nlohmann::json OverlapReport::to_json() const {
  return {{"s", s},
          {"n_measured", n_measured},
          {"mean_count", mean_count},
          {"kappa", kappa},
          {"epsilon", epsilon},
          {"bound_exponent", bound_exponent},
          {"c_ov_fit", c_ov_fit},
          {"probes", probes}};
}

nlohmann::json SummabilityReport::to_json() const {
  return {{"z", {z.real(), z.imag()}},
          {"r", r},
          {"m", m},
          {"kappa", kappa},
          {"sum_value", sum_value},
          {"truncation_tail_bound", truncation_tail_bound},
          {"terms", terms},
          {"bound_exponent", bound_exponent}};
}

}  // namespace dfock
