#include <algorithm>
#include <cmath>
#include <sstream>

#include "dfock/errors.hpp"
#include "dfock/remez.hpp"

namespace dfock {

KovrijkineReport kovrijkine_check(const KovrijkineInput& in) {
  require(static_cast<bool>(in.f), ErrorKind::InvalidArgument, "kovrijkine_check: no function");
  require(in.rho_w > 0 && in.r > 0 && in.big_r > in.r, ErrorKind::InvalidArgument,
          "kovrijkine_check: need rho > 0 and 0 < r < R");
  require(in.p_exp >= 1, ErrorKind::InvalidArgument, "kovrijkine_check: p must be at least 1");
  require(in.c > 0 && in.c2 > 0, ErrorKind::InvalidArgument, "kovrijkine_check: constants must be positive");
  require(in.radial_nodes >= 1 && in.angular_nodes >= 1 && in.boundary_points >= 1, ErrorKind::InvalidArgument,
          "kovrijkine_check: empty grid");

  KovrijkineReport rep;
  const double inner = in.r * in.rho_w;
  const double outer = in.big_r * in.rho_w;
  const double dr = inner / static_cast<double>(in.radial_nodes);
  const double dth = 2 * kPi / static_cast<double>(in.angular_nodes);

  // Polar midpoint grid over D^r(w); E is intersected with it node-wise.
  const std::size_t count = in.radial_nodes * in.angular_nodes;
  std::vector<double> x(count), y(count), area(count);
  std::vector<cplx> fv(count);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < in.radial_nodes; ++i) {
    const double rr = (static_cast<double>(i) + 0.5) * dr;
    for (std::size_t t = 0; t < in.angular_nodes; ++t) {
      const double th = (static_cast<double>(t) + 0.5) * dth;
      const cplx z = in.w + std::polar(rr, th);
      x[idx] = z.real();
      y[idx] = z.imag();
      area[idx] = rr * dr * dth;
      fv[idx] = in.f(z);
      ++idx;
    }
  }
  std::vector<std::uint8_t> mask(count);
  in.e.indicator(x.data(), y.data(), count, mask.data());

  bool reached = false;
  double lp_small = 0, lp_e = 0;
  for (std::size_t k = 0; k < count; ++k) {
    const double a = std::abs(fv[k]);
    rep.sup_small = std::max(rep.sup_small, a);
    reached = reached || a >= 1.0;
    const double ap = std::pow(a, in.p_exp) * area[k];
    lp_small += ap;
    if (mask[k]) {
      rep.sup_e = std::max(rep.sup_e, a);
      rep.area_e += area[k];
      lp_e += ap;
    }
  }
  if (!reached) {
    std::ostringstream os;
    os << "sup |f| on D^r(w) is " << rep.sup_small << " < 1 on the sampled grid";
    fail(ErrorKind::HypothesisUnsatisfied, os.str());
  }
  require(rep.area_e > 0, ErrorKind::InvalidArgument, "kovrijkine_check: E has zero measure in D^r(w)");
  rep.lp_small = std::pow(lp_small, 1 / in.p_exp);
  rep.lp_e = std::pow(lp_e, 1 / in.p_exp);

  // Maximum modulus: the sup over D^R(w) is attained on its boundary.
  for (std::size_t t = 0; t < in.boundary_points; ++t) {
    const double th = 2 * kPi * static_cast<double>(t) / static_cast<double>(in.boundary_points);
    rep.big_m = std::max(rep.big_m, std::abs(in.f(in.w + std::polar(outer, th))));
  }
  rep.big_m = std::max(rep.big_m, rep.sup_small);

  const double ratio = in.big_r / (in.big_r - in.r);
  const double shape = std::pow(ratio, 4) * std::log(ratio);
  rep.eta = in.c2 * shape;
  rep.base = in.c * inner * inner / rep.area_e;
  const double log_m = std::log(rep.big_m);
  rep.rhs_sup = std::pow(rep.base, rep.eta * log_m) * rep.sup_e;
  rep.slack_sup = rep.rhs_sup - rep.sup_small;
  rep.holds_sup = rep.sup_small <= rep.rhs_sup * (1 + 1e-12);
  rep.rhs_lp = std::pow(rep.base, rep.eta * log_m + 1 / in.p_exp) * rep.lp_e;
  rep.slack_lp = rep.rhs_lp - rep.lp_small;
  rep.holds_lp = rep.lp_small <= rep.rhs_lp * (1 + 1e-12);

  const double need = std::log(rep.sup_small / std::max(rep.sup_e, 1e-300));
  if (need <= 0) {
    rep.c2_needed = 0;
  } else if (log_m > 0 && rep.base > 1) {
    rep.c2_needed = need / (log_m * std::log(rep.base) * shape);
  } else {
    rep.c2_needed = std::numeric_limits<double>::infinity();
  }
  return rep;
}

nlohmann::json KovrijkineReport::to_json() const {
  return {{"sup_small", sup_small}, {"sup_e", sup_e},     {"M", big_m},           {"area_e", area_e},
          {"eta", eta},             {"base", base},       {"rhs_sup", rhs_sup},   {"slack_sup", slack_sup},
          {"lp_small", lp_small},   {"lp_e", lp_e},       {"rhs_lp", rhs_lp},     {"slack_lp", slack_lp},
          {"c2_needed", c2_needed}, {"holds_sup", holds_sup}, {"holds_lp", holds_lp}};
}

}  // namespace dfock
