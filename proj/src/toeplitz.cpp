#include "dfock/toeplitz.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <Eigen/Eigenvalues>

#include "dfock/errors.hpp"

namespace dfock {
namespace {

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_number(std::string_view s) {
  std::string str(s);
  char* end = nullptr;
  const double v = std::strtod(str.c_str(), &end);
  if (str.empty() || end != str.c_str() + str.size())
    fail(ErrorKind::RegionParseError, "symbol: expected a number, got '" + str + "'");
  return v;
}

void check_values(double outside, double inside) {
  require(std::isfinite(outside) && std::isfinite(inside) && outside >= 0 && inside >= 0, ErrorKind::InvalidArgument,
          "symbol values must be finite and nonnegative");
}

}  // namespace

SymbolFunction SymbolFunction::constant(double c) {
  check_values(c, c);
  return {Region::full(), c, c};
}

SymbolFunction SymbolFunction::mix(double outside, double inside, const Region& e) {
  check_values(outside, inside);
  return {e, outside, inside};
}

double SymbolFunction::v(cplx z) const { return e.contains(z) ? inside : outside; }

double SymbolFunction::v_max() const {
  if (e.kind() == Region::Kind::Full) return inside;
  if (e.kind() == Region::Kind::Empty) return outside;
  return std::max(inside, outside);
}

Region SymbolFunction::level_region(double s) const {
  const bool in = inside > s;
  const bool out = outside > s;
  if (in && out) return Region::full();
  if (in) return e;
  if (out) return Region::complement(e);
  return Region::empty();
}

std::string SymbolFunction::to_string() const {
  if (e.kind() == Region::Kind::Full) return "const(" + fmt(inside) + ")";
  if (e.kind() == Region::Kind::Empty) return "const(" + fmt(outside) + ")";
  return "mix(" + fmt(outside) + "," + fmt(inside) + "," + e.to_string() + ")";
}

SymbolFunction parse_symbol(std::string_view text) {
  std::string s;
  for (char ch : text)
    if (ch != ' ' && ch != '\t') s.push_back(ch);
  const auto starts = [&](std::string_view p) { return s.rfind(p, 0) == 0; };
  if (s.empty() || s.back() != ')') fail(ErrorKind::RegionParseError, "symbol: expected const(c) or mix(a,b,<region>)");
  if (starts("const(")) return SymbolFunction::constant(parse_number(std::string_view(s).substr(6, s.size() - 7)));
  if (starts("mix(")) {
    const std::string body = s.substr(4, s.size() - 5);
    const std::size_t c1 = body.find(',');
    const std::size_t c2 = c1 == std::string::npos ? c1 : body.find(',', c1 + 1);
    if (c2 == std::string::npos) fail(ErrorKind::RegionParseError, "symbol: mix needs outside,inside,<region>");
    return SymbolFunction::mix(parse_number(std::string_view(body).substr(0, c1)),
                               parse_number(std::string_view(body).substr(c1 + 1, c2 - c1 - 1)),
                               parse_region(std::string_view(body).substr(c2 + 1)));
  }
  fail(ErrorKind::RegionParseError, "symbol: unknown form '" + s + "'");
}

ToeplitzTruncation assemble_toeplitz(const FockTruncation& trunc, const SymbolFunction& v) {
  ToeplitzTruncation out;
  out.n_max = trunc.n_max;
  out.v = v;
  out.quadrature = assemble_masked(trunc, v.piecewise());
  out.t = out.quadrature.m;
  return out;
}

InvertibilityReport invertibility_check(const FockTruncation& trunc, const ToeplitzTruncation& t, double s,
                                        std::optional<double> c) {
  InvertibilityReport rep;
  rep.symbol = t.v.to_string();
  rep.n_max = t.n_max;
  rep.v_max = t.v.v_max();
  rep.s = s;
  require(rep.v_max > 0, ErrorKind::InvalidArgument, "invertibility_check: symbol vanishes identically");
  if (!(s > 0) || s > rep.v_max)
    fail(ErrorKind::InvalidLevel, "invertibility_check: level must lie in (0, v_max]");
  rep.s_prime = s / rep.v_max;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(0.5 * (t.t + t.t.adjoint()), Eigen::EigenvaluesOnly);
  rep.lambda_min = solver.eigenvalues()[0];
  rep.lambda_max = solver.eigenvalues()[solver.eigenvalues().size() - 1];
  rep.invertible = rep.lambda_min > 1e-10;
  rep.inv_norm = rep.invertible ? 1 / rep.lambda_min : std::numeric_limits<double>::infinity();

  if (c) {
    rep.c = *c;
    rep.c_source = "supplied";
  } else {
    const Region es = t.v.level_region(s);
    const SamplingConstant sc = sampling_constant(trunc, es);
    if (es.kind() == Region::Kind::Empty || sc.gram.masked_area <= 0)
      fail(ErrorKind::InvalidLevel, "invertibility_check: the level set {v > s} has zero area");
    rep.c = sc.c_emp;
    rep.c_source = "auto";
  }
  const double prod = rep.s_prime * rep.c;
  require(rep.c >= 0 && prod <= 1 + 1e-12, ErrorKind::InvalidArgument,
          "invertibility_check: need (s / v_max) * C <= 1");
  rep.root = std::sqrt(std::max(0.0, 1 - prod * prod));
  rep.bound = rep.root < 1 ? rep.v_max / (1 - rep.root) : std::numeric_limits<double>::infinity();
  rep.bound_scaled = rep.root < 1 ? 1 / (rep.v_max * (1 - rep.root)) : std::numeric_limits<double>::infinity();
  rep.slack = rep.bound_scaled - rep.inv_norm;
  rep.holds = rep.inv_norm <= rep.bound_scaled * (1 + 1e-9);
  rep.intermediate_lhs =
      std::max(std::abs(1 - rep.lambda_min / rep.v_max), std::abs(1 - rep.lambda_max / rep.v_max));
  rep.intermediate_rhs = rep.root;
  rep.intermediate_holds = rep.intermediate_lhs <= rep.intermediate_rhs + 1e-6;
  return rep;
}

std::vector<LevelRow> level_ladder(const FockTruncation& trunc, const ToeplitzTruncation& t,
                                   std::span<const double> levels) {
  std::vector<LevelRow> rows;
  for (double s : levels) {
    const InvertibilityReport rep = invertibility_check(trunc, t, s);
    rows.push_back({s, rep.c, rep.bound_scaled, rep.holds});
  }
  return rows;
}

nlohmann::json InvertibilityReport::to_json() const {
  return {{"symbol", symbol},
          {"n_max", n_max},
          {"lambda_min", lambda_min},
          {"lambda_max", lambda_max},
          {"invertible", invertible},
          {"inv_norm", inv_norm},
          {"v_max", v_max},
          {"s", s},
          {"s_prime", s_prime},
          {"C", c},
          {"C_source", c_source},
          {"root", root},
          {"bound", bound},
          {"bound_scaled", bound_scaled},
          {"slack", slack},
          {"holds", holds},
          {"intermediate_lhs", intermediate_lhs},
          {"intermediate_rhs", intermediate_rhs},
          {"intermediate_holds", intermediate_holds}};
}

}  // namespace dfock
