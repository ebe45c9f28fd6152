#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "dfock/errors.hpp"
#include "dfock/weights.hpp"

namespace dfock {
namespace {

using Params = std::map<std::string, double>;

double parse_number(std::string_view text, std::string_view spec) {
  double v = 0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end || !std::isfinite(v))
    fail(ErrorKind::UnknownWeight, "bad numeric parameter '" + std::string(text) + "' in weight '" +
                                       std::string(spec) + "'");
  return v;
}

Params parse_params(std::string_view body, std::string_view spec) {
  Params out;
  while (!body.empty()) {
    const auto comma = body.find(',');
    const std::string_view item = body.substr(0, comma);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0)
      fail(ErrorKind::UnknownWeight, "expected key=value in weight '" + std::string(spec) + "'");
    out[std::string(item.substr(0, eq))] = parse_number(item.substr(eq + 1), spec);
    body = comma == std::string_view::npos ? std::string_view{} : body.substr(comma + 1);
  }
  return out;
}

double take(Params& params, const std::string& key, double fallback) {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  const double v = it->second;
  params.erase(it);
  return v;
}

WeightSpec abs2(double k) {
  if (!(k > 0)) fail(ErrorKind::UnknownWeight, "abs2: scale must be positive");
  WeightSpec w;
  w.eval = [k](cplx z) { return k * std::norm(z); };
  w.laplacian = [k](cplx) { return 4 * k; };
  w.disk_mass_closed_form = [k](cplx, double t) -> std::optional<double> { return 4 * k * kPi * t * t; };
  w.radial_profile = [k](double s) { return k * s * s; };
  w.radial_laplacian = [k](double) { return 4 * k; };
  w.analytic_doubling_constant = 4.0;
  return w;
}

WeightSpec abs_pow(double alpha) {
  if (!(alpha > 0)) fail(ErrorKind::UnknownWeight, "abs_pow: alpha must be positive");
  WeightSpec w;
  const auto lap = [alpha](double s) {
    if (alpha == 2) return 4.0;
    if (s == 0) return alpha < 2 ? std::numeric_limits<double>::infinity() : 0.0;
    return alpha * alpha * std::pow(s, alpha - 2);
  };
  w.eval = [alpha](cplx z) { return std::pow(std::abs(z), alpha); };
  w.laplacian = [lap](cplx z) { return lap(std::abs(z)); };
  w.disk_mass_closed_form = [alpha](cplx z, double t) -> std::optional<double> {
    if (z != cplx(0, 0)) return std::nullopt;
    return 2 * kPi * alpha * std::pow(t, alpha);
  };
  w.radial_profile = [alpha](double s) { return std::pow(s, alpha); };
  w.radial_laplacian = lap;
  if (alpha < 2) w.singular_points.push_back({0, 0});
  return w;
}

WeightSpec abs2_pert(double c) {
  WeightSpec w;
  w.eval = [c](cplx z) { return std::norm(z) + c * (z * z).real(); };
  w.laplacian = [](cplx) { return 4.0; };
  w.disk_mass_closed_form = [](cplx, double t) -> std::optional<double> { return 4 * kPi * t * t; };
  w.analytic_doubling_constant = 4.0;
  return w;
}

WeightSpec re_weight() {
  WeightSpec w;
  w.eval = [](cplx z) { return z.real(); };
  w.laplacian = [](cplx) { return 0.0; };
  w.disk_mass_closed_form = [](cplx, double) -> std::optional<double> { return 0.0; };
  return w;
}

}  // namespace

WeightSpec make_weight(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string name(spec.substr(0, colon));
  Params params = colon == std::string_view::npos ? Params{} : parse_params(spec.substr(colon + 1), spec);

  WeightSpec w;
  if (name == "abs2") {
    w = abs2(take(params, "scale", 1.0));
  } else if (name == "abs_pow") {
    if (!params.count("alpha")) fail(ErrorKind::UnknownWeight, "abs_pow needs alpha=<value>");
    w = abs_pow(take(params, "alpha", 0));
  } else if (name == "abs2_pert") {
    w = abs2_pert(take(params, "c", 0.1));
  } else if (name == "re") {
    w = re_weight();
  } else {
    fail(ErrorKind::UnknownWeight, "unknown weight '" + std::string(spec) + "'");
  }
  if (!params.empty())
    fail(ErrorKind::UnknownWeight, "unknown parameter '" + params.begin()->first + "' for weight '" + name + "'");
  w.name = std::string(spec);
  return w;
}

std::vector<std::string> weight_corpus_names() {
  return {"abs2", "abs2:scale=4", "abs_pow:alpha=0.5", "abs_pow:alpha=1", "abs_pow:alpha=3", "abs2_pert:c=0.1",
          "re"};
}

}  // namespace dfock
