#include <algorithm>
#include <cmath>

#include "dfock/errors.hpp"
#include "dfock/regions.hpp"
#include "dfock/rng.hpp"

namespace dfock {
namespace {

struct Strata {
  std::size_t nu = 1, nt = 1;
  std::size_t count() const { return nu * nt; }
};

// Strata in (u = s^2/R^2, theta), each of equal area, two points apiece.
Strata strata_for(std::size_t samples) {
  const std::size_t h = samples / 2;
  Strata st;
  st.nu = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(h) / 4))));
  st.nt = std::max<std::size_t>(1, h / st.nu);
  return st;
}

ProbeDensity estimate(const Region& e, cplx z, double radius, const Strata& st, std::uint64_t seed, std::size_t k,
                      std::vector<double>& x, std::vector<double>& y, std::vector<std::uint8_t>& in) {
  Rng rng = make_rng(seed, Stream::Density, k);
  const std::size_t h = st.count();
  x.resize(2 * h);
  y.resize(2 * h);
  in.resize(2 * h);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < st.nu; ++i) {
    for (std::size_t t = 0; t < st.nt; ++t) {
      for (int rep = 0; rep < 2; ++rep) {
        const double u = (static_cast<double>(i) + uniform01(rng)) / static_cast<double>(st.nu);
        const double th = 2 * kPi * (static_cast<double>(t) + uniform01(rng)) / static_cast<double>(st.nt);
        const double s = radius * std::sqrt(u);
        x[idx] = z.real() + s * std::cos(th);
        y[idx] = z.imag() + s * std::sin(th);
        ++idx;
      }
    }
  }
  e.indicator(x.data(), y.data(), 2 * h, in.data());
  double sum = 0, var = 0;
  for (std::size_t s = 0; s < h; ++s) {
    const double y1 = in[2 * s], y2 = in[2 * s + 1];
    sum += y1 + y2;
    var += (y1 - y2) * (y1 - y2);
  }
  const double hh = static_cast<double>(h);
  return {z, sum / (2 * hh), std::sqrt(var) / (2 * hh)};
}

}  // namespace

DensityReport density_with_rho(const Region& e, double r, std::span<const cplx> probes,
                               std::span<const double> rho_values, const DensityOptions& options) {
  require(!probes.empty(), ErrorKind::InvalidArgument, "density: probe list is empty");
  require(probes.size() == rho_values.size(), ErrorKind::InvalidArgument, "density: rho list size mismatch");
  require(options.samples_per_disk >= 1000, ErrorKind::InsufficientSamples,
          "density: samples_per_disk must be at least 1000");
  require(r > 0, ErrorKind::InvalidArgument, "density: r must be positive");

  const Strata st = strata_for(options.samples_per_disk);
  DensityReport rep;
  rep.r = r;
  rep.seed = options.seed;
  rep.samples_per_disk = 2 * st.count();
  rep.gamma = 2.0;
  std::vector<double> x, y;
  std::vector<std::uint8_t> in;
  for (std::size_t k = 0; k < probes.size(); ++k) {
    const ProbeDensity pd = estimate(e, probes[k], r * rho_values[k], st, options.seed, k, x, y, in);
    rep.per_probe.push_back(pd);
    if (pd.fraction < rep.gamma) {
      rep.gamma = pd.fraction;
      rep.witness_z = pd.z;
      rep.std_error = pd.std_error;
    }
  }
  rep.half_width = 3 * rep.std_error;
  return rep;
}

DensityReport density(const Region& e, const WeightSpec& w, double r, std::span<const cplx> probes,
                      const DensityOptions& options, const RhoOptions& rho_options) {
  require(!probes.empty(), ErrorKind::InvalidArgument, "density: probe list is empty");
  std::vector<double> rhos;
  rhos.reserve(probes.size());
  for (const cplx& z : probes) rhos.push_back(rho(w, z, rho_options));
  return density_with_rho(e, r, probes, rhos, options);
}

std::vector<cplx> probe_lattice(const WeightSpec& w, const Rect& domain, double pitch_factor,
                                const RhoOptions& rho_options) {
  require(domain.valid(), ErrorKind::DomainTooSmall, "probe_lattice: empty domain");
  require(pitch_factor > 0, ErrorKind::InvalidArgument, "probe_lattice: pitch factor must be positive");
  const double pitch = pitch_factor * rho_min_estimate(w, domain, rho_options);
  const auto count = [&](double len) { return static_cast<std::size_t>(std::floor(len / pitch)) + 1; };
  const std::size_t nx = count(domain.width()), ny = count(domain.height());
  require(nx * ny <= 10'000'000, ErrorKind::InvalidArgument, "probe_lattice: too many probes");
  std::vector<cplx> out;
  out.reserve(nx * ny);
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i)
      out.emplace_back(domain.x0 + pitch * static_cast<double>(i), domain.y0 + pitch * static_cast<double>(j));
  return out;
}

RenormalizedDensity renormalize_density(double gamma, double r, const Region& e, const WeightSpec& w,
                                        std::span<const cplx> probes, const DensityOptions& options,
                                        const RhoOptions& rho_options) {
  if (!(r > 0 && r < 1)) fail(ErrorKind::InvalidRadius, "renormalize_density: r must lie in (0,1)");
  RenormalizedDensity out;
  out.gamma = gamma;
  out.r = r;
  out.report = density(e, w, 1.0, probes, options, rho_options);
  out.gamma_tilde = out.report.gamma;
  return out;
}

nlohmann::json DensityReport::to_json() const {
  return {{"gamma", gamma},
          {"r", r},
          {"witness_z", {witness_z.real(), witness_z.imag()}},
          {"std_error", std_error},
          {"half_width", half_width},
          {"samples_per_disk", samples_per_disk},
          {"probes", per_probe.size()},
          {"seed", seed},
          {"estimator", "stratified Monte Carlo"}};
}

}  // namespace dfock
