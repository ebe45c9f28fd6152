#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "dfock/errors.hpp"
#include "dfock/fit.hpp"
#include "dfock/kernels.hpp"
#include "dfock/quadrature.hpp"
#include "dfock/rng.hpp"
#include "dfock/sampling.hpp"

namespace dfock {
namespace {

struct Ring {
  double s;       // node radius
  double weight;  // Gauss-Legendre weight in s
  double lo, hi;  // radial cell bounds
};

std::vector<Ring> make_rings(const FockTruncation& tr, const std::vector<double>& breakpoints) {
  const TruncationOptions& o = tr.options;
  std::vector<double> edges;
  for (std::size_t p = 0; p <= o.radial_panels; ++p)
    edges.push_back(tr.r_cut * static_cast<double>(p) / static_cast<double>(o.radial_panels));
  for (double b : breakpoints)
    if (b > 0 && b < tr.r_cut) edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::vector<Ring> rings;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const QuadratureRule q = gauss_legendre(o.panel_points, edges[p], edges[p + 1]);
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
      const double lo = i == 0 ? edges[p] : 0.5 * (q.nodes[i - 1] + q.nodes[i]);
      const double hi = i + 1 == q.nodes.size() ? edges[p + 1] : 0.5 * (q.nodes[i] + q.nodes[i + 1]);
      rings.push_back({q.nodes[i], q.weights[i], lo, hi});
    }
  }
  return rings;
}

double min_eigen(const Eigen::MatrixXcd& m, double* lambda_max = nullptr, Eigen::VectorXcd* vec = nullptr) {
  const Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, vec ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (lambda_max) *lambda_max = solver.eigenvalues()[solver.eigenvalues().size() - 1];
  if (vec) *vec = solver.eigenvectors().col(0);
  return solver.eigenvalues()[0];
}

}  // namespace

MaskedGram assemble_masked(const FockTruncation& tr, const PiecewiseSymbol& v) {
  require(v.outside >= 0 && v.inside >= 0, ErrorKind::InvalidArgument, "assemble_masked: symbol must be nonnegative");
  const auto& kern = kernels::active();
  const std::size_t dim = tr.dim();
  const std::size_t nt = tr.options.angular_nodes;
  const double dth = 2 * kPi / static_cast<double>(nt);
  const std::vector<Ring> rings = make_rings(tr, v.e.radial_breakpoints());
  const bool trivial = v.e.kind() == Region::Kind::Full || v.e.kind() == Region::Kind::Empty;

  std::vector<double> cos_t(nt), sin_t(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    cos_t[t] = std::cos(dth * static_cast<double>(t));
    sin_t[t] = std::sin(dth * static_cast<double>(t));
  }
  std::vector<std::vector<double>> cos_b(dim, std::vector<double>(nt)), sin_b(dim, std::vector<double>(nt));
  for (std::size_t b = 0; b < dim; ++b)
    for (std::size_t t = 0; t < nt; ++t) {
      const double a = dth * static_cast<double>(b * t % nt);
      cos_b[b][t] = std::cos(a);
      sin_b[b][t] = std::sin(a);
    }

  MaskedGram out;
  out.m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  out.tensor_nodes = rings.size() * nt;

  // Scattered sub-nodes collected as rows sqrt(weight * v) e_j e^{-w}.
  std::vector<std::vector<double>> ur(dim), ui(dim);

  std::vector<double> x(nt), y(nt), vals(nt);
  std::vector<std::uint8_t> center(nt), corner(nt), straddle(nt);
  std::vector<double> amp(dim);
  for (const Ring& ring : rings) {
    for (std::size_t t = 0; t < nt; ++t) {
      x[t] = ring.s * cos_t[t];
      y[t] = ring.s * sin_t[t];
    }
    v.e.indicator(x.data(), y.data(), nt, center.data());
    std::fill(straddle.begin(), straddle.end(), std::uint8_t{0});
    if (!trivial) {
      const double nudge_r = 1e-6 * (ring.hi - ring.lo);
      const double nudge_t = 1e-6 * dth;
      for (int c = 0; c < 4; ++c) {
        const double rr = (c & 1) ? ring.hi - nudge_r : ring.lo + nudge_r;
        const double off = (c & 2) ? 0.5 * dth - nudge_t : -0.5 * dth + nudge_t;
        for (std::size_t t = 0; t < nt; ++t) {
          const double th = dth * static_cast<double>(t) + off;
          x[t] = rr * std::cos(th);
          y[t] = rr * std::sin(th);
        }
        v.e.indicator(x.data(), y.data(), nt, corner.data());
        for (std::size_t t = 0; t < nt; ++t) straddle[t] |= corner[t] != center[t];
      }
    }

    const double cell_weight = ring.weight * ring.s * dth;
    bool constant = true;
    for (std::size_t t = 0; t < nt; ++t) {
      vals[t] = straddle[t] ? 0.0 : (center[t] ? v.inside : v.outside);
      if (!straddle[t] && center[t]) out.masked_area += cell_weight;
      constant = constant && vals[t] == vals[0];
    }
    for (std::size_t j = 0; j < dim; ++j) amp[j] = tr.weighted_modulus(static_cast<int>(j), ring.s);

    for (std::size_t b = 0; b < dim; ++b) {
      cplx g;
      if (constant) {
        g = b == 0 ? cplx(2 * kPi * vals[0], 0.0) : cplx(0.0, 0.0);
      } else {
        g = dth * cplx(kern.dot(vals.data(), cos_b[b].data(), nt), kern.dot(vals.data(), sin_b[b].data(), nt));
      }
      if (g == cplx(0.0, 0.0)) continue;
      for (std::size_t k = 0; k + b < dim; ++k) {
        const std::size_t j = k + b;
        out.m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) += ring.weight * ring.s * amp[j] * amp[k] * g;
      }
    }

    for (std::size_t t = 0; t < nt; ++t) {
      if (!straddle[t]) continue;
      ++out.straddling_cells;
      const double cell_area = 0.5 * (ring.hi * ring.hi - ring.lo * ring.lo) * dth;
      for (int a = 0; a < 4; ++a) {
        const double r1 = ring.lo + (ring.hi - ring.lo) * a / 4.0;
        const double r2 = ring.lo + (ring.hi - ring.lo) * (a + 1) / 4.0;
        const double rr = 0.5 * (r1 + r2);
        const double sub_w = cell_weight * (0.5 * (r2 * r2 - r1 * r1) * dth / 4.0) / cell_area;
        for (int b = 0; b < 4; ++b) {
          const double th = dth * static_cast<double>(t) + dth * ((b + 0.5) / 4.0 - 0.5);
          const cplx z = std::polar(rr, th);
          const bool in = v.e.contains(z);
          if (in) out.masked_area += sub_w;
          const double val = in ? v.inside : v.outside;
          const double sq = std::sqrt(sub_w * val);
          for (std::size_t j = 0; j < dim; ++j) {
            const cplx e = std::polar(sq * tr.weighted_modulus(static_cast<int>(j), rr), static_cast<double>(j) * th);
            ur[j].push_back(e.real());
            ui[j].push_back(e.imag());
          }
          ++out.scattered_nodes;
        }
      }
    }
  }

  if (out.scattered_nodes > 0)
    for (std::size_t j = 0; j < dim; ++j)
      for (std::size_t k = 0; k <= j; ++k) {
        double re = 0, im = 0;
        kern.cdot_conj(ur[j].data(), ui[j].data(), ur[k].data(), ui[k].data(), ur[j].size(), &re, &im);
        out.m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) += cplx(re, im);
      }
  for (std::size_t j = 0; j < dim; ++j)
    for (std::size_t k = j + 1; k < dim; ++k)
      out.m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) =
          std::conj(out.m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)));
  for (std::size_t j = 0; j < dim; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    out.m(jj, jj) = out.m(jj, jj).real();
  }

  const double rc = tr.r_cut;
  const Region clipped = Region::intersect({v.e, Region::disk({0, 0}, rc)});
  const AreaEstimate mc = monte_carlo_area(clipped, {-rc, -rc, rc, rc}, tr.options.area_check_samples, tr.options.seed);
  out.mc_area = mc.area;
  out.mc_std_error = mc.std_error;
  const double floor = 1e-6 * kPi * rc * rc;
  if (std::abs(out.masked_area - mc.area) > 3 * mc.std_error + floor) {
    std::ostringstream os;
    os << "masked quadrature area " << out.masked_area << " vs Monte Carlo " << mc.area << " +- " << mc.std_error
       << " for " << v.e.to_string() << " (increase radial panels or angular nodes)";
    fail(ErrorKind::QuadratureUnderResolved, os.str());
  }
  return out;
}

SamplingConstant sampling_constant(const FockTruncation& trunc, const Region& e) {
  SamplingConstant out;
  out.gram = assemble_masked(trunc, {e, 0.0, 1.0});
  out.lambda_min = min_eigen(out.gram.m, &out.lambda_max);
  out.c_emp = std::sqrt(std::max(0.0, out.lambda_min));
  return out;
}

SamplingConstant sampling_constant_lp(const FockTruncation& trunc, const Region& e, double p_exp, std::size_t trials,
                                      std::uint64_t seed) {
  require(p_exp >= 1, ErrorKind::InvalidArgument, "sampling_constant_lp: p must be at least 1");
  if (p_exp == 2) return sampling_constant(trunc, e);
  require(trials >= 1, ErrorKind::InvalidArgument, "sampling_constant_lp: need at least one trial");

  SamplingConstant out;
  out.p_exp = p_exp;
  out.upper_bound_only = true;
  out.gram = assemble_masked(trunc, {e, 0.0, 1.0});
  Eigen::VectorXcd start;
  out.lambda_min = min_eigen(out.gram.m, &out.lambda_max, &start);

  const std::size_t dim = trunc.dim();
  const std::size_t nt = 256;
  const double dth = 2 * kPi / static_cast<double>(nt);
  std::vector<double> edges;
  for (std::size_t p = 0; p <= 64; ++p) edges.push_back(trunc.r_cut * static_cast<double>(p) / 64.0);
  for (double b : e.radial_breakpoints())
    if (b > 0 && b < trunc.r_cut) edges.push_back(b);
  const QuadratureRule radial = composite_gauss_legendre(edges, 8);

  std::vector<cplx> basis;  // node-major, dim entries per node
  std::vector<double> weight;
  std::vector<std::uint8_t> inside;
  for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
    const double s = radial.nodes[i];
    std::vector<double> xs(nt), ys(nt);
    std::vector<std::uint8_t> in(nt);
    for (std::size_t t = 0; t < nt; ++t) {
      xs[t] = s * std::cos(dth * static_cast<double>(t));
      ys[t] = s * std::sin(dth * static_cast<double>(t));
    }
    e.indicator(xs.data(), ys.data(), nt, in.data());
    for (std::size_t t = 0; t < nt; ++t) {
      const double th = dth * static_cast<double>(t);
      for (std::size_t j = 0; j < dim; ++j)
        basis.push_back(std::polar(trunc.weighted_modulus(static_cast<int>(j), s), static_cast<double>(j) * th));
      weight.push_back(radial.weights[i] * s * dth);
      inside.push_back(in[t]);
    }
  }

  const auto ratio = [&](const Eigen::VectorXcd& c) {
    double num = 0, den = 0;
    for (std::size_t q = 0; q < weight.size(); ++q) {
      cplx f = 0;
      for (std::size_t j = 0; j < dim; ++j) f += c[static_cast<Eigen::Index>(j)] * basis[q * dim + j];
      const double a = std::pow(std::abs(f), p_exp) * weight[q];
      den += a;
      if (inside[q]) num += a;
    }
    return den > 0 ? std::pow(num / den, 1 / p_exp) : 0.0;
  };

  out.c_emp = ratio(start);
  for (std::size_t t = 0; t < trials; ++t) {
    const std::vector<cplx> c = random_unit_coefficients(dim, seed, t);
    out.c_emp = std::min(out.c_emp, ratio(Eigen::Map<const Eigen::VectorXcd>(c.data(), static_cast<Eigen::Index>(dim))));
  }
  return out;
}

TheoreticalBound theoretical_bound(double gamma, double r, double p_exp, double kappa, const double (&lambdas)[3],
                                   double c) {
  require(gamma > 0 && gamma <= 1, ErrorKind::InvalidArgument, "theoretical_bound: gamma must lie in (0,1]");
  require(r > 1, ErrorKind::InvalidArgument, "theoretical_bound: r must exceed 1");
  require(p_exp >= 1 && kappa > 0 && c > 0, ErrorKind::InvalidArgument, "theoretical_bound: invalid constants");
  for (double l : lambdas) require(l > 0, ErrorKind::InvalidArgument, "theoretical_bound: lambdas must be positive");
  TheoreticalBound out;
  out.l_eval = lambdas[0] * std::pow(r, 1 / kappa) + (lambdas[1] + lambdas[2] * std::log(1 + r)) / p_exp;
  out.bound_eval = std::pow(gamma / c, out.l_eval);
  out.base_exceeds_one = gamma / c > 1;
  return out;
}

std::vector<cplx> random_unit_coefficients(std::size_t dim, std::uint64_t seed, std::uint64_t counter) {
  Rng rng = make_rng(seed, Stream::TestFunctions, counter);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<cplx> c(dim);
  double norm2 = 0;
  for (cplx& v : c) {
    const double re = normal(rng);
    const double im = normal(rng);
    v = {re, im};
    norm2 += std::norm(v);
  }
  const double inv = norm2 > 0 ? 1 / std::sqrt(norm2) : 0.0;
  for (cplx& v : c) v *= inv;
  return c;
}

GammaExperiment gamma_dependence_experiment(const FockTruncation& trunc, std::span<const Region> family, double r,
                                            double p_exp, std::span<const cplx> probes,
                                            const DensityOptions& density_options) {
  require(!family.empty(), ErrorKind::InvalidArgument, "gamma_dependence_experiment: empty family");
  GammaExperiment ex;
  for (const Region& e : family) {
    const DensityReport d = density(e, trunc.w, r, probes, density_options);
    const SamplingConstant sc = sampling_constant_lp(trunc, e, p_exp, 64, density_options.seed);
    ex.rows.push_back({e.to_string(), d.gamma, d.half_width, sc.c_emp});
  }
  std::stable_sort(ex.rows.begin(), ex.rows.end(), [](const GammaRow& a, const GammaRow& b) { return a.gamma < b.gamma; });

  ex.strictly_increasing = true;
  for (std::size_t i = 1; i < ex.rows.size(); ++i)
    if (!(ex.rows[i].c_emp > ex.rows[i - 1].c_emp && ex.rows[i].gamma > ex.rows[i - 1].gamma))
      ex.strictly_increasing = false;

  std::vector<double> lx, ly;
  ex.necessity_const = std::numeric_limits<double>::infinity();
  for (const GammaRow& row : ex.rows) {
    if (row.c_emp > 0) ex.necessity_const = std::min(ex.necessity_const, row.gamma / std::pow(row.c_emp, p_exp));
    if (row.c_emp > 0 && row.gamma > 0) {
      lx.push_back(std::log(row.gamma));
      ly.push_back(std::log(row.c_emp));
    }
  }
  if (!std::isfinite(ex.necessity_const)) ex.necessity_const = 0;
  bool distinct = false;
  for (std::size_t i = 1; i < lx.size(); ++i) distinct = distinct || lx[i] != lx[0];
  if (lx.size() >= 2 && distinct) {
    const LineFit fit = fit_line(lx, ly);
    ex.log_slope = fit.slope;
    ex.r_squared = fit.r_squared;
  } else {
    ex.r_squared = 1;
  }
  return ex;
}

nlohmann::json SamplingReport::to_json() const {
  return {{"region", region},
          {"gamma", gamma},
          {"gamma_half_width", gamma_half_width},
          {"r", r},
          {"p", p_exp},
          {"c_emp", c_emp},
          {"c_emp_upper_bound_only", upper_bound_only},
          {"kappa", kappa},
          {"lambdas", {lambdas[0], lambdas[1], lambdas[2]}},
          {"c", c},
          {"L_eval", bound.l_eval},
          {"bound_eval", bound.bound_eval},
          {"gamma_over_c_exceeds_one", bound.base_exceeds_one},
          {"n_max", n_max},
          {"seed", seed},
          {"masked_area", masked_area},
          {"mc_area", mc_area}};
}

}  // namespace dfock
