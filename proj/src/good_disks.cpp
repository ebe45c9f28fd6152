#include <algorithm>
#include <cmath>

#include "dfock/errors.hpp"
#include "dfock/kernels.hpp"
#include "dfock/quadrature.hpp"
#include "dfock/sampling.hpp"

namespace dfock {
namespace {

// Polar Gauss-Legendre x equispaced-angle nodes of one disk, with the
// quadrature weight times e^{-p w} folded into each node.
struct DiskNodes {
  std::vector<double> x, y, weight;

  void build(const WeightSpec& w, const QuadratureRule& radial, std::size_t angular, cplx center, double radius,
             double p_exp) {
    const std::size_t n = radial.nodes.size() * angular;
    x.resize(n);
    y.resize(n);
    weight.resize(n);
    const double dth = 2 * kPi / static_cast<double>(angular);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
      const double u = radial.nodes[i];
      const double base = radial.weights[i] * u * radius * radius * dth;
      for (std::size_t t = 0; t < angular; ++t, ++idx) {
        const double th = dth * static_cast<double>(t);
        x[idx] = center.real() + radius * u * std::cos(th);
        y[idx] = center.imag() + radius * u * std::sin(th);
        weight[idx] = base * std::exp(-p_exp * w.radial_profile(std::hypot(x[idx], y[idx])));
      }
    }
  }
};

// int |f|^p e^{-p w} dA over the nodes, f given by ascending coefficients.
struct Integrand {
  std::vector<double> cr, ci;
  std::vector<double> vals;

  double operator()(const DiskNodes& d, double p_exp) {
    const std::size_t n = d.x.size();
    vals.resize(n);
    kernels::active().poly_abs2(cr.data(), ci.data(), cr.size() - 1, d.x.data(), d.y.data(), n, vals.data());
    double total = 0;
    if (p_exp == 2) {
      for (std::size_t q = 0; q < n; ++q) total += d.weight[q] * vals[q];
    } else {
      for (std::size_t q = 0; q < n; ++q) total += d.weight[q] * std::pow(vals[q], 0.5 * p_exp);
    }
    return total;
  }
};

}  // namespace

std::vector<GoodDiskReport> good_disk_classification_batch(const FockTruncation& trunc, const Covering& cov,
                                                           const std::vector<std::vector<cplx>>& coefficients,
                                                           double s, double p_exp, const GoodDiskOptions& options) {
  if (cov.weight_name != trunc.w.name)
    fail(ErrorKind::CoveringWeightMismatch,
         "good_disk_classification: covering built for '" + cov.weight_name + "', truncation uses '" + trunc.w.name + "'");
  require(s > 0 && p_exp >= 1, ErrorKind::InvalidArgument, "good_disk_classification: need s > 0 and p >= 1");
  require(options.c_frac > 0 && options.c_frac < 1, ErrorKind::InvalidArgument,
          "good_disk_classification: c_frac must lie in (0,1)");
  require(options.disk_radial >= 1 && options.disk_angular >= 1, ErrorKind::InvalidArgument,
          "good_disk_classification: empty disk quadrature");

  const std::size_t nf = coefficients.size();
  std::vector<Integrand> fs(nf);
  std::vector<GoodDiskReport> reps(nf);
  for (std::size_t f = 0; f < nf; ++f) {
    const auto& c = coefficients[f];
    require(c.size() == trunc.dim(), ErrorKind::InvalidArgument,
            "good_disk_classification: coefficient vector length differs from n_max + 1");
    double norm2 = 0;
    for (const cplx& v : c) norm2 += std::norm(v);
    require(norm2 > 0, ErrorKind::InvalidArgument, "good_disk_classification: f must be nonzero");
    for (std::size_t j = 0; j < trunc.dim(); ++j) {
      const cplx scaled = c[j] * std::exp(-trunc.log_norm[j]);
      fs[f].cr.push_back(scaled.real());
      fs[f].ci.push_back(scaled.imag());
    }
    reps[f].total_norm_p = norm2;
  }

  const double t = 4 * s;
  const OverlapReport ov = overlap_count(cov, t, interior_probe_grid(cov, t, options.overlap_probe_n), 0.5, 0.3);
  const double k = options.k ? *options.k : std::pow(static_cast<double>(ov.n_measured) / (1 - options.c_frac), 1 / p_exp);
  const double kp = std::pow(k, p_exp);
  for (GoodDiskReport& rep : reps) {
    rep.s = s;
    rep.t = t;
    rep.p_exp = p_exp;
    rep.c_frac = options.c_frac;
    rep.disks = cov.size();
    rep.n_overlap = ov.n_measured;
    rep.k = k;
  }

  if (p_exp != 2) {
    // Global norm on the cutoff disk; the basis tail beyond it is below tail_tol.
    std::vector<double> edges;
    for (std::size_t p = 0; p <= 64; ++p) edges.push_back(static_cast<double>(p) / 64.0);
    DiskNodes global;
    global.build(trunc.w, composite_gauss_legendre(edges, 8), 512, {0, 0}, trunc.r_cut, p_exp);
    for (std::size_t f = 0; f < nf; ++f) reps[f].total_norm_p = fs[f](global, p_exp);
  }

  const QuadratureRule radial = gauss_legendre(options.disk_radial, 0.0, 1.0);
  DiskNodes small, large;
  std::vector<double> captured(nf, 0.0);
  for (std::size_t d = 0; d < cov.size(); ++d) {
    small.build(trunc.w, radial, options.disk_angular, cov.centers[d], s * cov.rho[d], p_exp);
    large.build(trunc.w, radial, options.disk_angular, cov.centers[d], t * cov.rho[d], p_exp);
    for (std::size_t f = 0; f < nf; ++f) {
      const double ns = fs[f](small, p_exp);
      const double nt = fs[f](large, p_exp);
      if (ns > 0 && nt <= kp * ns) {
        reps[f].good_indices.push_back(d);
        captured[f] += ns;
      }
    }
  }
  for (std::size_t f = 0; f < nf; ++f) {
    reps[f].captured_fraction = captured[f] / reps[f].total_norm_p;
    reps[f].holds = reps[f].captured_fraction >= options.c_frac;
  }
  return reps;
}

double local_norm_p(const FockTruncation& trunc, std::span<const cplx> coefficients, cplx center, double radius,
                    double p_exp, std::size_t radial_nodes, std::size_t angular_nodes) {
  require(coefficients.size() == trunc.dim(), ErrorKind::InvalidArgument,
          "local_norm_p: coefficient vector length differs from n_max + 1");
  require(radius > 0 && p_exp >= 1 && radial_nodes >= 1 && angular_nodes >= 1, ErrorKind::InvalidArgument,
          "local_norm_p: invalid disk or quadrature");
  Integrand f;
  for (std::size_t j = 0; j < trunc.dim(); ++j) {
    const cplx scaled = coefficients[j] * std::exp(-trunc.log_norm[j]);
    f.cr.push_back(scaled.real());
    f.ci.push_back(scaled.imag());
  }
  DiskNodes nodes;
  nodes.build(trunc.w, gauss_legendre(radial_nodes, 0.0, 1.0), angular_nodes, center, radius, p_exp);
  return f(nodes, p_exp);
}

GoodDiskReport good_disk_classification(const FockTruncation& trunc, const Covering& cov,
                                        std::span<const cplx> coefficients, double s, double p_exp,
                                        const GoodDiskOptions& options) {
  const std::vector<std::vector<cplx>> one{std::vector<cplx>(coefficients.begin(), coefficients.end())};
  return good_disk_classification_batch(trunc, cov, one, s, p_exp, options).front();
}

nlohmann::json GoodDiskReport::to_json() const {
  return {{"s", s},
          {"t", t},
          {"p", p_exp},
          {"c_frac", c_frac},
          {"N_t", n_overlap},
          {"K", k},
          {"disks", disks},
          {"good_count", good_indices.size()},
          {"good_indices", good_indices},
          {"total_norm_p", total_norm_p},
          {"captured_fraction", captured_fraction},
          {"holds", holds}};
}

}  // namespace dfock
