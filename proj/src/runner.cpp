#include "dfock/runner.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>

#include <Eigen/Eigenvalues>

#include "dfock/covering.hpp"
#include "dfock/errors.hpp"
#include "dfock/fit.hpp"
#include "dfock/regions.hpp"
#include "dfock/remez.hpp"
#include "dfock/sampling.hpp"
#include "dfock/toeplitz.hpp"
#include "dfock/weights.hpp"

namespace dfock {
namespace {

using Json = nlohmann::json;

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json config_json(const RunConfig& cfg) {
  // The output location is not part of the result.
  RunConfig copy = cfg;
  copy.out.clear();
  Json j = Json::object();
  const std::string text = copy.serialize();
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t end = text.find('\n', start);
    const std::string line = text.substr(start, end - start);
    const std::size_t eq = line.find(" = ");
    j[line.substr(0, eq)] = line.substr(eq + 3);
    start = end + 1;
  }
  j.erase("out");
  return j;
}

RhoOptions rho_options(const RunConfig& cfg) {
  RhoOptions o;
  o.tol = cfg.rho_tol;
  o.rel_tol = cfg.rho_tol;
  return o;
}

TruncationOptions truncation_options(const RunConfig& cfg) {
  TruncationOptions o;
  o.tail_tol = cfg.tail_tol;
  o.radial_panels = cfg.radial_panels;
  o.panel_points = cfg.panel_points;
  o.angular_nodes = cfg.angular_nodes;
  o.area_check_samples = cfg.area_samples;
  o.seed = cfg.seed;
  return o;
}

DensityOptions density_options(const RunConfig& cfg) { return {cfg.samples_per_disk, cfg.seed}; }

std::vector<cplx> lattice_centers(const Rect& domain, std::size_t n) {
  require(n >= 1, ErrorKind::InvalidArgument, "need at least one center");
  const auto side = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  const GridSpec g{domain, side, side};
  std::vector<cplx> out;
  for (std::size_t j = 0; j < side && out.size() < n; ++j)
    for (std::size_t i = 0; i < side && out.size() < n; ++i) out.push_back(g.point(i, j));
  return out;
}

void violation(RunOutcome& o, const std::string& what) {
  o.exit_code = 2;
  o.violations.push_back(what);
}

Covering make_covering(const RunConfig& cfg, const WeightSpec& w) {
  CoveringOptions opts;
  opts.rho = rho_options(cfg);
  return build_covering(w, cfg.domain, cfg.delta, opts);
}

void run_rho(const RunConfig& cfg, RunOutcome& o) {
  const WeightSpec w = make_weight(cfg.weight);
  const double value = rho(w, cfg.z, rho_options(cfg));
  o.report.json["result"] = {{"weight", w.name}, {"z", {cfg.z.real(), cfg.z.imag()}}, {"rho", value}};
  o.summary = fmt(value);
}

void run_growth(const RunConfig& cfg, RunOutcome& o) {
  const WeightSpec w = make_weight(cfg.weight);
  const std::vector<cplx> centers = lattice_centers(cfg.domain, cfg.centers);
  const GrowthReport g = growth_exponent(w, centers, cfg.radii, cfg.rho_tol);
  o.report.json["result"] = g.to_json();
  Table t{{"re", "im", "r", "rho", "mass", "ratio"}, {}};
  Table plot{{"log_r", "log_mass"}, {}};
  for (const GrowthSample& s : g.samples) {
    t.add({s.z.real(), s.z.imag(), s.r, s.rho, s.mass, s.ratio});
    plot.add({std::log(s.r), std::log(s.mass)});
  }
  o.report.tables["growth"] = t;
  o.report.plotdata["growth_loglog"] = plot;
  o.summary = "kappa_fit=" + fmt(g.kappa_fit) + " c_mu=" + fmt(g.c_mu_estimate);
}

void run_covering(const RunConfig& cfg, RunOutcome& o) {
  const WeightSpec w = make_weight(cfg.weight);
  const Covering cov = make_covering(cfg, w);
  const std::size_t uncovered = uncovered_count(cov, cov.r0_effective, {cfg.domain, cfg.probe_n, cfg.probe_n});
  Json j = cov.summary_json();
  j["uncovered_at_r0"] = uncovered;
  j["probe_grid"] = cfg.probe_n;
  j["min_separation_ratio"] = min_separation_ratio(cov);
  o.report.json["result"] = j;
  Table t{{"k", "re", "im", "rho"}, {}};
  Table plot{{"x", "y"}, {}};
  for (std::size_t k = 0; k < cov.size(); ++k) {
    t.add({static_cast<long long>(k), cov.centers[k].real(), cov.centers[k].imag(), cov.rho[k]});
    plot.add({cov.centers[k].real(), cov.centers[k].imag()});
  }
  o.report.tables["covering"] = t;
  o.report.plotdata["centers"] = plot;
  if (uncovered > 0) violation(o, std::to_string(uncovered) + " probe points uncovered at r0_effective");
  o.summary = std::to_string(cov.size()) + " centers, r0_effective=" + fmt(cov.r0_effective);
}

void run_overlap(const RunConfig& cfg, RunOutcome& o) {
  const WeightSpec w = make_weight(cfg.weight);
  const Covering cov = make_covering(cfg, w);
  const OverlapLadder ladder = overlap_ladder(cov, cfg.s_ladder, cfg.probe_n, cfg.kappa, cfg.epsilon);
  Json rungs = Json::array();
  Table t{{"s", "n_measured", "mean_count", "bound_exponent", "c_ov_fit"}, {}};
  Table plot{{"log1p_s", "log_n"}, {}};
  for (const OverlapReport& r : ladder.rungs) {
    rungs.push_back(r.to_json());
    t.add({r.s, static_cast<long long>(r.n_measured), r.mean_count, r.bound_exponent, ladder.c_ov_fit});
    plot.add({std::log1p(r.s), std::log(static_cast<double>(r.n_measured))});
  }
  o.report.json["result"] = {{"covering", cov.summary_json()},
                             {"rungs", rungs},
                             {"c_ov_fit", ladder.c_ov_fit},
                             {"fitted_exponent", ladder.fitted_exponent},
                             {"holds", ladder.holds}};
  o.report.tables["overlap"] = t;
  o.report.plotdata["overlap_loglog"] = plot;
  if (!ladder.holds) violation(o, "overlap growth exponent exceeds 1 + 1/kappa + kappa*epsilon/(1+kappa)");
  o.summary = "c_ov_fit=" + fmt(ladder.c_ov_fit) + " fitted_exponent=" + fmt(ladder.fitted_exponent);
}

void run_summability(const RunConfig& cfg, RunOutcome& o) {
  const WeightSpec w = make_weight(cfg.weight);
  if (!(cfg.m > 1 + 1 / cfg.kappa))
    fail(ErrorKind::ExponentTooSmall, "summability: m = " + fmt(cfg.m) + " must exceed 1 + 1/kappa = " +
                                          fmt(1 + 1 / cfg.kappa));
  const Covering cov = make_covering(cfg, w);
  std::vector<double> rs, sums;
  Json rows = Json::array();
  Table t{{"r", "sum", "tail_bound", "terms"}, {}};
  Table plot{{"log_r", "log_sum"}, {}};
  double exponent = 0;
  for (double r : cfg.r_ladder) {
    const SummabilityReport rep = summability_sum(cov, w, cfg.z, r, cfg.m, cfg.kappa, rho_options(cfg));
    exponent = rep.bound_exponent;
    rows.push_back(rep.to_json());
    rs.push_back(r);
    sums.push_back(rep.sum_value);
    t.add({r, rep.sum_value, rep.truncation_tail_bound, static_cast<long long>(rep.terms)});
    plot.add({std::log(r), std::log(rep.sum_value)});
  }
  const AnchoredPowerFit fit = anchored_power_fit(rs, sums, exponent);
  bool monotone = true;
  for (std::size_t i = 1; i < sums.size(); ++i) monotone = monotone && sums[i] <= sums[i - 1];
  o.report.json["result"] = {{"rows", rows},
                             {"bound_exponent", exponent},
                             {"fitted_C", fit.constant},
                             {"bound_holds", fit.holds},
                             {"monotone", monotone}};
  o.report.tables["summability"] = t;
  o.report.plotdata["summability_loglog"] = plot;
  if (!fit.holds) violation(o, "sum exceeds fitted C r^exponent");
  if (!monotone) violation(o, "sum is not nonincreasing in r");
  o.summary = "fitted_C=" + fmt(fit.constant) + " exponent=" + fmt(exponent);
}

void run_harmonic(const RunConfig& cfg, RunOutcome& o) {
  const WeightSpec w = make_weight(cfg.weight);
  Json rows = Json::array();
  Table t{{"sigma", "radius", "a_sigma", "condition"}, {}};
  Table plot{{"sigma", "a_sigma"}, {}};
  for (double sigma : cfg.sigma_ladder) {
    HarmonicApprox h;
    try {
      h = harmonic_approximation(w, cfg.z, sigma, {}, rho_options(cfg));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::MassNeverReachesOne) throw;
      // mu vanishes (harmonic weight): fit at the unit scale.
      h = harmonic_approximation_at_scale(w, cfg.z, sigma, 1.0);
    }
    rows.push_back(h.to_json());
    t.add({sigma, h.radius, h.a_sigma, h.condition});
    plot.add({sigma, h.a_sigma});
  }
  o.report.json["result"] = {{"weight", w.name}, {"z", {cfg.z.real(), cfg.z.imag()}}, {"rows", rows}};
  o.report.tables["harmonic"] = t;
  o.report.plotdata["a_sigma"] = plot;
  o.summary = std::to_string(cfg.sigma_ladder.size()) + " scales fitted";
}

void run_density(const RunConfig& cfg, RunOutcome& o) {
  const WeightSpec w = make_weight(cfg.weight);
  const Region e = parse_region(cfg.region);
  const std::vector<cplx> probes = probe_lattice(w, cfg.domain, cfg.probe_pitch, rho_options(cfg));
  const DensityReport d = density(e, w, cfg.r, probes, density_options(cfg), rho_options(cfg));
  Json j = d.to_json();
  j.erase("per_probe");
  j["region"] = e.to_string();
  j["probes"] = probes.size();
  o.report.json["result"] = j;
  Table t{{"re", "im", "fraction", "std_error"}, {}};
  for (const ProbeDensity& p : d.per_probe) t.add({p.z.real(), p.z.imag(), p.fraction, p.std_error});
  o.report.tables["density"] = t;
  o.summary = "gamma=" + fmt(d.gamma);
}

void run_remez(const RunConfig& cfg, RunOutcome& o) {
  RemezOptions opts;
  opts.mc_points = cfg.mc_points;
  opts.seed = cfg.seed;
  const RemezExperiment ex = remez_experiment(cfg.disk, cfg.degree_ladder, cfg.s_fracs, cfg.trials, opts);
  Json cells = Json::array();
  Table t{{"n", "s_frac", "max_ratio", "fitted_c"}, {}};
  Table plot{{"n", "log_max_ratio"}, {}};
  for (const RemezReport& r : ex.cells) {
    cells.push_back(r.to_json());
    t.add({static_cast<long long>(r.n), r.s_frac, r.max_ratio, r.fitted_c});
    plot.add({static_cast<double>(r.n), std::log(r.max_ratio)});
  }
  o.report.json["result"] = {
      {"cells", cells}, {"fitted_c", ex.fitted_c}, {"holds", ex.holds}, {"monotone_in_s", ex.monotone_in_s}};
  o.report.tables["remez"] = t;
  o.report.plotdata["remez_ratio"] = plot;
  if (!ex.holds) violation(o, "a Remez cell exceeds the fitted bound");
  o.summary = "fitted_c=" + fmt(ex.fitted_c);
}

void run_sample(const RunConfig& cfg, RunOutcome& o) {
  const WeightSpec w = make_weight(cfg.weight);
  const Region e = parse_region(cfg.region);
  const FockTruncation trunc = build_truncation(w, cfg.n_max, truncation_options(cfg));
  const SamplingConstant sc = sampling_constant_lp(trunc, e, cfg.p, cfg.lp_trials, cfg.seed);
  const std::vector<cplx> probes = probe_lattice(w, cfg.domain, cfg.probe_pitch, rho_options(cfg));
  const DensityReport d = density(e, w, cfg.r, probes, density_options(cfg), rho_options(cfg));

  SamplingReport rep;
  rep.region = e.to_string();
  rep.gamma = d.gamma;
  rep.gamma_half_width = d.half_width;
  rep.r = cfg.r;
  rep.p_exp = cfg.p;
  rep.c_emp = sc.c_emp;
  rep.upper_bound_only = sc.upper_bound_only;
  rep.kappa = cfg.kappa;
  for (int i = 0; i < 3; ++i) rep.lambdas[i] = cfg.lambdas[static_cast<std::size_t>(i)];
  rep.c = cfg.c;
  rep.n_max = cfg.n_max;
  rep.seed = cfg.seed;
  rep.masked_area = sc.gram.masked_area;
  rep.mc_area = sc.gram.mc_area;
  const bool bound_defined = rep.gamma > 0 && cfg.r > 1;
  if (bound_defined) rep.bound = theoretical_bound(rep.gamma, cfg.r, cfg.p, cfg.kappa, rep.lambdas, cfg.c);
  Json j = rep.to_json();
  if (!bound_defined) {
    j["L_eval"] = nullptr;
    j["bound_eval"] = nullptr;
  }
  j["lambda_min"] = sc.lambda_min;
  j["lambda_max"] = sc.lambda_max;
  j["r_cut"] = trunc.r_cut;
  j["straddling_cells"] = sc.gram.straddling_cells;
  o.report.json["result"] = j;
  if (sc.c_emp > 1 + 1e-8) violation(o, "c_emp exceeds 1");
  if (bound_defined && rep.bound.base_exceeds_one) o.report.json["warning"] = "gamma / c exceeds 1";
  o.summary = "c_emp=" + fmt(sc.c_emp) + " gamma=" + fmt(rep.gamma);
}

std::vector<Region> parse_family(const std::string& text) {
  std::vector<Region> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find(';', start);
    const std::string part = text.substr(start, end == std::string::npos ? std::string::npos : end - start);
    if (part.find_first_not_of(" \t") != std::string::npos) out.push_back(parse_region(part));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  require(!out.empty(), ErrorKind::InvalidArgument, "gamma-ladder: 'family' lists no regions");
  return out;
}

void run_gamma_ladder(const RunConfig& cfg, RunOutcome& o) {
  const WeightSpec w = make_weight(cfg.weight);
  const std::vector<Region> family = parse_family(cfg.family);
  const FockTruncation trunc = build_truncation(w, cfg.n_max, truncation_options(cfg));
  const std::vector<cplx> probes = probe_lattice(w, cfg.domain, cfg.probe_pitch, rho_options(cfg));
  const GammaExperiment ex = gamma_dependence_experiment(trunc, family, cfg.r, cfg.p, probes, density_options(cfg));
  Json rows = Json::array();
  Table t{{"gamma", "c_emp", "log_slope"}, {}};
  Table plot{{"log_gamma", "log_c_emp"}, {}};
  for (const GammaRow& r : ex.rows) {
    rows.push_back({{"region", r.region}, {"gamma", r.gamma}, {"gamma_half_width", r.gamma_half_width},
                    {"c_emp", r.c_emp}});
    t.add({r.gamma, r.c_emp, ex.log_slope});
    if (r.gamma > 0 && r.c_emp > 0) plot.add({std::log(r.gamma), std::log(r.c_emp)});
  }
  o.report.json["result"] = {{"rows", rows},
                             {"log_slope", ex.log_slope},
                             {"r_squared", ex.r_squared},
                             {"necessity_const", ex.necessity_const},
                             {"strictly_increasing", ex.strictly_increasing},
                             {"n_max", cfg.n_max}};
  o.report.tables["gamma_dependence"] = t;
  o.report.plotdata["gamma_loglog"] = plot;
  if (!ex.strictly_increasing) violation(o, "c_emp is not strictly increasing in gamma");
  o.summary = "log_slope=" + fmt(ex.log_slope) + " r_squared=" + fmt(ex.r_squared);
}

void run_good_disks(const RunConfig& cfg, RunOutcome& o) {
  const WeightSpec w = make_weight(cfg.weight);
  const Covering cov = make_covering(cfg, w);
  const FockTruncation trunc = build_truncation(w, cfg.n_max, truncation_options(cfg));
  GoodDiskOptions opts;
  opts.c_frac = cfg.c_frac;
  opts.overlap_probe_n = cfg.probe_n;
  Json rows = Json::array();
  Table t{{"function", "K", "N_t", "good_count", "captured_fraction", "holds"}, {}};
  Table plot{{"function", "captured_fraction"}, {}};
  std::size_t failures = 0;
  std::vector<std::vector<cplx>> coeffs;
  for (std::size_t k = 0; k < cfg.test_functions; ++k)
    coeffs.push_back(random_unit_coefficients(trunc.dim(), cfg.seed, k));
  const std::vector<GoodDiskReport> reps = good_disk_classification_batch(trunc, cov, coeffs, cfg.s, cfg.p, opts);
  for (std::size_t k = 0; k < reps.size(); ++k) {
    const GoodDiskReport& rep = reps[k];
    Json j = rep.to_json();
    j["function"] = k;
    rows.push_back(j);
    t.add({static_cast<long long>(k), rep.k, static_cast<long long>(rep.n_overlap),
           static_cast<long long>(rep.good_indices.size()), rep.captured_fraction,
           static_cast<long long>(rep.holds)});
    plot.add({static_cast<double>(k), rep.captured_fraction});
    if (!rep.holds) ++failures;
  }
  o.report.json["result"] = {{"covering", cov.summary_json()}, {"functions", rows}, {"failures", failures}};
  o.report.tables["good_disks"] = t;
  o.report.plotdata["captured_fraction"] = plot;
  if (failures > 0) violation(o, std::to_string(failures) + " test functions capture less than c_frac");
  o.summary = std::to_string(cfg.test_functions - failures) + "/" + std::to_string(cfg.test_functions) +
              " functions satisfy the good-disk inequality";
}

void run_toeplitz(const RunConfig& cfg, RunOutcome& o) {
  const WeightSpec w = make_weight(cfg.weight);
  const SymbolFunction v = parse_symbol(cfg.symbol);
  const FockTruncation trunc = build_truncation(w, cfg.n_max, truncation_options(cfg));
  const ToeplitzTruncation t = assemble_toeplitz(trunc, v);
  const InvertibilityReport rep = invertibility_check(trunc, t, cfg.level, cfg.big_c);
  Json j = rep.to_json();
  if (!rep.invertible) j["note"] = "not invertible at this truncation";
  o.report.json["result"] = j;
  if (!cfg.levels.empty()) {
    Table lt{{"s", "C", "bound_scaled", "consistent"}, {}};
    for (const LevelRow& row : level_ladder(trunc, t, cfg.levels))
      lt.add({row.s, row.c_emp, row.bound_scaled, static_cast<long long>(row.consistent)});
    o.report.tables["levels"] = lt;
  }
  Table spec{{"index", "eigenvalue"}, {}};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(t.t, Eigen::EigenvaluesOnly);
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
    spec.add({static_cast<long long>(i), solver.eigenvalues()[i]});
  o.report.plotdata["spectrum"] = spec;
  if (rep.c_source == "auto") {
    if (!rep.holds) violation(o, "inverse norm exceeds the bound");
    if (!rep.intermediate_holds) violation(o, "||I - T_{v/v_max}|| exceeds sqrt(1 - s'^2 C^2)");
  }
  o.summary = "inv_norm=" + fmt(rep.inv_norm) + " bound=" + fmt(rep.bound_scaled);
}

const std::map<std::string, std::function<void(const RunConfig&, RunOutcome&)>, std::less<>>& table() {
  static const std::map<std::string, std::function<void(const RunConfig&, RunOutcome&)>, std::less<>> t = {
      {"rho", run_rho},
      {"growth", run_growth},
      {"covering", run_covering},
      {"overlap", run_overlap},
      {"summability", run_summability},
      {"harmonic", run_harmonic},
      {"density", run_density},
      {"remez", run_remez},
      {"sample", run_sample},
      {"gamma-ladder", run_gamma_ladder},
      {"good-disks", run_good_disks},
      {"toeplitz", run_toeplitz},
  };
  return t;
}

}  // namespace

std::vector<std::string> subcommands() {
  std::vector<std::string> names;
  for (const auto& [name, fn] : table()) names.push_back(name);
  return names;
}

RunOutcome run_subcommand(std::string_view name, const RunConfig& config) {
  const auto it = table().find(name);
  require(it != table().end(), ErrorKind::InvalidArgument, "unknown subcommand '" + std::string(name) + "'");
  RunOutcome o;
  o.report.json["subcommand"] = std::string(name);
  o.report.json["config"] = config_json(config);
  it->second(config, o);
  o.report.json["violations"] = o.violations;
  o.report.json["exit_code"] = o.exit_code;
  return o;
}

std::string resolve_output_dir(std::string_view name, const RunConfig& config) {
  if (!config.out.empty()) return config.out;
  const char* root = std::getenv("DFOCK_OUT");
  const std::string base = root && *root ? root : "dfock_out";
  return base + "/" + std::string(name);
}

}  // namespace dfock
