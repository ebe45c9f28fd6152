#include "dfock/remez.hpp"

#include <algorithm>
#include <cmath>

#include "dfock/errors.hpp"
#include "dfock/kernels.hpp"
#include "dfock/rng.hpp"

namespace dfock {
namespace {

// Coefficients of prod_k (u - roots_k), ascending.
std::vector<cplx> from_roots(std::span<const cplx> roots) {
  std::vector<cplx> c{1.0};
  for (const cplx& r : roots) {
    c.push_back(0.0);
    for (std::size_t j = c.size() - 1; j > 0; --j) c[j] = c[j - 1] - r * c[j];
    c[0] = -r * c[0];
  }
  return c;
}

struct PointCloud {
  std::vector<double> x, y;    // interior Monte Carlo points of the unit disk
  std::vector<double> bx, by;  // equispaced boundary points
};

PointCloud make_cloud(const RemezOptions& o) {
  require(o.mc_points >= 2 && o.boundary_points >= 1, ErrorKind::InvalidArgument, "remez: empty point sets");
  PointCloud pc;
  Rng rng = make_rng(o.seed, Stream::RemezPoints);
  pc.x.resize(o.mc_points);
  pc.y.resize(o.mc_points);
  for (std::size_t i = 0; i < o.mc_points; ++i) {
    const double r = std::sqrt(uniform01(rng));
    const double th = 2 * kPi * uniform01(rng);
    pc.x[i] = r * std::cos(th);
    pc.y[i] = r * std::sin(th);
  }
  for (std::size_t i = 0; i < o.boundary_points; ++i) {
    const double th = 2 * kPi * static_cast<double>(i) / static_cast<double>(o.boundary_points);
    pc.bx.push_back(std::cos(th));
    pc.by.push_back(std::sin(th));
  }
  return pc;
}

std::size_t quantile_rank(double s_frac, std::size_t n_points) {
  if (!(s_frac > 0)) fail(ErrorKind::InvalidArgument, "remez: s must be positive");
  if (s_frac >= 1.0 - 1.0 / static_cast<double>(n_points))
    fail(ErrorKind::MeasureTargetInfeasible, "remez: s must stay below |G| (1 - 1/N) for N Monte Carlo points");
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(s_frac * static_cast<double>(n_points))));
}

// Exact order statistic vals[rank] (0-based, as if sorted). A strided
// subsample brackets the answer; one pass counts values below the bracket
// and collects those inside, and selection runs on the bracket only.
class OrderStatistic {
 public:
  void prepare(const std::vector<double>& vals) {
    const std::size_t n = vals.size();
    const std::size_t m = std::min<std::size_t>(n, 2048);
    sample_.resize(m);
    for (std::size_t i = 0; i < m; ++i) sample_[i] = vals[i * n / m];
    std::sort(sample_.begin(), sample_.end());
  }

  double select(const std::vector<double>& vals, std::size_t rank) {
    const std::size_t n = vals.size(), m = sample_.size();
    const std::size_t pos = rank * m / n, slack = 96;
    const double lo = pos >= slack ? sample_[pos - slack] : -std::numeric_limits<double>::infinity();
    const double hi = pos + slack < m ? sample_[pos + slack] : std::numeric_limits<double>::infinity();
    if (inside_.size() < n) inside_.resize(n);
    std::size_t count = 0;
    std::size_t below = kernels::active().bracket(vals.data(), n, lo, hi, inside_.data(), &count);
    if (rank < below || rank - below >= count) {
      std::copy(vals.begin(), vals.end(), inside_.begin());
      below = 0;
      count = n;
    }
    const auto first = inside_.begin();
    const auto at = first + static_cast<std::ptrdiff_t>(rank - below);
    std::nth_element(first, at, first + static_cast<std::ptrdiff_t>(count));
    return *at;
  }

 private:
  std::vector<double> sample_, inside_;
};

double median(std::vector<double> v) {
  if (v.empty()) return 0;
  const std::size_t m = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m), v.end());
  if (v.size() % 2) return v[m];
  const double hi = v[m];
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m));
  return 0.5 * (lo + hi);
}

}  // namespace

const char* to_string(PolynomialFamily f) noexcept {
  switch (f) {
    case PolynomialFamily::Gaussian: return "gaussian";
    case PolynomialFamily::MonomialShift: return "monomial_shift";
    case PolynomialFamily::BoundaryRoot: return "boundary_root";
    case PolynomialFamily::ChebyshevDiameter: return "chebyshev_diameter";
  }
  return "?";
}

cplx PolynomialSample::operator()(cplx u) const {
  cplx v = 0;
  for (std::size_t j = coefficients.size(); j-- > 0;) v = v * u + coefficients[j];
  return scale * v;
}

PolynomialSample draw_polynomial(int n, std::uint64_t trial, std::uint64_t seed) {
  require(n >= 0, ErrorKind::InvalidArgument, "draw_polynomial: degree must be nonnegative");
  PolynomialSample p;
  p.degree = n;
  p.trial = trial;
  Rng rng = make_rng(seed, Stream::RemezCoefficients, (static_cast<std::uint64_t>(n) << 40) ^ trial);
  const auto angle = [&] { return 2 * kPi * uniform01(rng); };
  switch (trial % 6) {
    case 3: {
      p.family = PolynomialFamily::MonomialShift;
      const cplx c0 = std::polar(std::sqrt(uniform01(rng)), angle());
      const std::vector<cplx> roots(static_cast<std::size_t>(n), c0);
      p.coefficients = from_roots(roots);
      break;
    }
    case 4: {
      p.family = PolynomialFamily::BoundaryRoot;
      const std::vector<cplx> roots(static_cast<std::size_t>(n), std::polar(1.0, angle()));
      p.coefficients = from_roots(roots);
      break;
    }
    case 5: {
      p.family = PolynomialFamily::ChebyshevDiameter;
      const cplx dir = std::polar(1.0, angle());
      std::vector<cplx> roots;
      for (int k = 1; k <= n; ++k) roots.push_back(dir * std::cos((2.0 * k - 1) * kPi / (2.0 * n)));
      p.coefficients = from_roots(roots);
      break;
    }
    default: {
      p.family = PolynomialFamily::Gaussian;
      std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
      for (int j = 0; j <= n; ++j) {
        const double re = normal(rng);
        const double im = normal(rng);
        p.coefficients.emplace_back(re, im);
      }
      if (p.coefficients.back() == cplx(0, 0)) p.coefficients.back() = 1.0;
    }
  }
  return p;
}

RemezExperiment remez_experiment(const Disk& g, std::span<const int> degrees, std::span<const double> s_fracs,
                                 std::size_t trials, const RemezOptions& options) {
  require(g.radius > 0, ErrorKind::InvalidArgument, "remez: disk radius must be positive");
  require(trials >= 1, ErrorKind::InvalidArgument, "remez: need at least one trial");
  require(!degrees.empty() && !s_fracs.empty(), ErrorKind::InvalidArgument, "remez: empty experiment grid");

  const PointCloud pc = make_cloud(options);
  const std::size_t npts = pc.x.size();
  std::vector<std::size_t> ranks;
  for (double f : s_fracs) ranks.push_back(quantile_rank(f, npts));
  // Quantiles are extracted from the largest rank down so each nth_element
  // works on the already-partitioned prefix.
  const auto& k = kernels::active();
  RemezExperiment ex;
  std::vector<double> vals(npts), bvals(pc.bx.size()), cr, ci, q(s_fracs.size());
  OrderStatistic stat;
  for (int n : degrees) {
    require(n >= 0, ErrorKind::InvalidArgument, "remez: degree must be nonnegative");
    const std::size_t first = ex.cells.size();
    for (double f : s_fracs) {
      RemezReport rep;
      rep.g = g;
      rep.s_frac = f;
      rep.s = f * g.area();
      rep.n = n;
      rep.trials = trials;
      rep.ratios.reserve(trials);
      ex.cells.push_back(std::move(rep));
    }
    for (std::size_t t = 0; t < trials; ++t) {
      const PolynomialSample p = draw_polynomial(n, t, options.seed);
      cr.resize(p.coefficients.size());
      ci.resize(p.coefficients.size());
      for (std::size_t j = 0; j < p.coefficients.size(); ++j) {
        cr[j] = p.coefficients[j].real();
        ci[j] = p.coefficients[j].imag();
      }
      const auto deg = static_cast<std::size_t>(n);
      k.poly_abs2(cr.data(), ci.data(), deg, pc.x.data(), pc.y.data(), npts, vals.data());
      k.poly_abs2(cr.data(), ci.data(), deg, pc.bx.data(), pc.by.data(), bvals.size(), bvals.data());
      const double bmax = *std::max_element(bvals.begin(), bvals.end());
      stat.prepare(vals);
      for (std::size_t si = 0; si < s_fracs.size(); ++si) q[si] = stat.select(vals, ranks[si] - 1);
      for (std::size_t si = 0; si < s_fracs.size(); ++si) {
        RemezReport& rep = ex.cells[first + si];
        const double qk = std::max(q[si], std::numeric_limits<double>::min());
        const double ratio = std::sqrt(bmax / qk);
        rep.ratios.push_back(ratio);
        if (ratio > rep.max_ratio) {
          rep.max_ratio = ratio;
          rep.worst_family = p.family;
          rep.worst_trial = t;
        }
      }
    }
  }

  for (RemezReport& rep : ex.cells) {
    rep.median_ratio = median(rep.ratios);
    if (rep.n > 0) {
      rep.fitted_c = rep.s * std::pow(rep.max_ratio, 1.0 / rep.n) / (rep.g.radius * rep.g.radius);
      ex.fitted_c = std::max(ex.fitted_c, rep.fitted_c);
    }
    if (!options.keep_ratios) {
      rep.ratios.clear();
      rep.ratios.shrink_to_fit();
    }
  }
  ex.holds = true;
  for (const RemezReport& rep : ex.cells) {
    const double bound = std::pow(ex.fitted_c * rep.g.radius * rep.g.radius / rep.s, rep.n);
    if (rep.max_ratio > bound * (1 + 1e-12)) ex.holds = false;
  }
  ex.monotone_in_s = true;
  for (std::size_t d = 0; d < degrees.size(); ++d)
    for (std::size_t a = 0; a < s_fracs.size(); ++a)
      for (std::size_t b = 0; b < s_fracs.size(); ++b) {
        const RemezReport& ra = ex.cells[d * s_fracs.size() + a];
        const RemezReport& rb = ex.cells[d * s_fracs.size() + b];
        if (ra.s_frac < rb.s_frac && ra.max_ratio < rb.max_ratio) ex.monotone_in_s = false;
      }
  return ex;
}

RemezReport remez_probe(const Disk& g, int n, double s, std::size_t trials, const RemezOptions& options) {
  require(g.radius > 0, ErrorKind::InvalidArgument, "remez: disk radius must be positive");
  if (s >= g.area()) fail(ErrorKind::MeasureTargetInfeasible, "remez: s must be below |G|");
  const int degrees[] = {n};
  const double fracs[] = {s / g.area()};
  RemezExperiment ex = remez_experiment(g, degrees, fracs, trials, options);
  return std::move(ex.cells.front());
}

nlohmann::json RemezReport::to_json() const {
  return {{"center", {g.center.real(), g.center.imag()}},
          {"radius", g.radius},
          {"n", n},
          {"s", s},
          {"s_frac", s_frac},
          {"trials", trials},
          {"max_ratio", max_ratio},
          {"median_ratio", median_ratio},
          {"fitted_c", fitted_c},
          {"worst_family", to_string(worst_family)},
          {"worst_trial", worst_trial}};
}

}  // namespace dfock
