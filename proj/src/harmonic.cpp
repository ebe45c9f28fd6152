#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "dfock/covering.hpp"
#include "dfock/errors.hpp"
#include "dfock/quadrature.hpp"

namespace dfock {
namespace {

// Re u^j and Im u^j for j = 1..degree, interleaved.
void basis_row(cplx u, int degree, double* out) {
  cplx p = 1.0;
  for (int j = 0; j < degree; ++j) {
    p *= u;
    out[2 * j] = p.real();
    out[2 * j + 1] = p.imag();
  }
}

}  // namespace

double HarmonicApprox::h(cplx z) const {
  const cplx u = (z - center) / radius;
  cplx p = 1.0;
  double v = 0;
  for (int j = 0; j < degree; ++j) {
    p *= u;
    v += h_re[j] * p.real() + h_im[j] * p.imag();
  }
  return v;
}

HarmonicApprox harmonic_approximation(const WeightSpec& w, cplx center, double sigma, const HarmonicOptions& options,
                                      const RhoOptions& rho_options) {
  return harmonic_approximation_at_scale(w, center, sigma, rho(w, center, rho_options), options);
}

HarmonicApprox harmonic_approximation_at_scale(const WeightSpec& w, cplx center, double sigma, double rho_center,
                                               const HarmonicOptions& options) {
  require(options.degree >= 1, ErrorKind::InvalidArgument, "harmonic_approximation: degree must be at least 1");
  require(sigma > 0 && rho_center > 0, ErrorKind::InvalidArgument,
          "harmonic_approximation: sigma and rho must be positive");
  require(options.radial_nodes >= 1 && options.angular_nodes >= 1 && options.check_radial >= 2 &&
              options.check_angular >= 1,
          ErrorKind::InvalidArgument, "harmonic_approximation: empty grid");

  HarmonicApprox out;
  out.center = center;
  out.sigma = sigma;
  out.radius = sigma * rho_center;
  out.degree = options.degree;

  const int nb = 2 * options.degree;
  const double w0 = w.eval(center);
  const QuadratureRule radial = gauss_legendre(options.radial_nodes, 0.0, 1.0);
  const std::size_t na = options.angular_nodes;
  const auto rows = static_cast<Eigen::Index>(radial.nodes.size() * na);
  Eigen::MatrixXd a(rows, nb);
  Eigen::VectorXd b(rows);
  Eigen::Index row = 0;
  std::vector<double> buf(static_cast<std::size_t>(nb));
  for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
    const double r = radial.nodes[i];
    const double sw = std::sqrt(radial.weights[i] * r * 2 * kPi / static_cast<double>(na));
    for (std::size_t t = 0; t < na; ++t) {
      const cplx u = std::polar(r, 2 * kPi * static_cast<double>(t) / static_cast<double>(na));
      basis_row(u, options.degree, buf.data());
      for (int c = 0; c < nb; ++c) a(row, c) = sw * buf[static_cast<std::size_t>(c)];
      b[row] = sw * (w.eval(center + out.radius * u) - w0);
      ++row;
    }
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  out.condition = sv[sv.size() - 1] > 0 ? sv[0] / sv[sv.size() - 1] : std::numeric_limits<double>::infinity();
  if (!(out.condition <= options.max_condition)) {
    std::ostringstream os;
    os << "condition number " << out.condition << " exceeds " << options.max_condition << " at degree "
       << options.degree << " (reduce the degree or add angular nodes)";
    fail(ErrorKind::IllConditionedFit, os.str());
  }
  const Eigen::VectorXd coef = svd.solve(b);
  for (int j = 0; j < options.degree; ++j) {
    out.h_re.push_back(coef[2 * j]);
    out.h_im.push_back(coef[2 * j + 1]);
    out.holo_completion.emplace_back(coef[2 * j], -coef[2 * j + 1]);
  }

  for (std::size_t i = 0; i < options.check_radial; ++i) {
    const double r = static_cast<double>(i) / static_cast<double>(options.check_radial - 1);
    for (std::size_t t = 0; t < options.check_angular; ++t) {
      const cplx u = std::polar(r, 2 * kPi * static_cast<double>(t) / static_cast<double>(options.check_angular));
      const cplx z = center + out.radius * u;
      out.a_sigma = std::max(out.a_sigma, std::abs(w.eval(z) - w0 - out.h(z)));
    }
  }
  return out;
}

nlohmann::json HarmonicApprox::to_json() const {
  nlohmann::json holo = nlohmann::json::array();
  for (const cplx& c : holo_completion) holo.push_back({c.real(), c.imag()});
  return {{"center", {center.real(), center.imag()}},
          {"sigma", sigma},
          {"radius", radius},
          {"degree", degree},
          {"h_re", h_re},
          {"h_im", h_im},
          {"holo_completion", holo},
          {"a_sigma", a_sigma},
          {"condition", condition}};
}

}  // namespace dfock
