// Acceptance runner: one PASS/FAIL line per criterion AC1..AC11.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../unit/oracle_values.hpp"
#include "dfock/covering.hpp"
#include "dfock/errors.hpp"
#include "dfock/fit.hpp"
#include "dfock/regions.hpp"
#include "dfock/remez.hpp"
#include "dfock/sampling.hpp"
#include "dfock/toeplitz.hpp"
#include "dfock/weights.hpp"

namespace fs = std::filesystem;
using namespace dfock;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// Collects sub-checks; the criterion passes when all of them do.
struct Verdict {
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, const std::string& what) {
    if (!ok) pass = false;
    notes.push_back((ok ? "" : "!") + what);
  }
  std::string text() const {
    std::string out;
    for (std::size_t i = 0; i < notes.size(); ++i) out += (i ? "; " : "") + notes[i];
    return out;
  }
};

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Io;
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

Verdict ac1() {
  Verdict v;
  const WeightSpec w = make_weight("abs2");
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(-10, 10);
  const auto t0 = Clock::now();
  double worst = 0;
  for (int i = 0; i < 100; ++i) worst = std::max(worst, std::abs(rho(w, {u(rng), u(rng)}) - oracle::kRhoAbs2));
  const double elapsed = seconds_since(t0);
  v.check(worst <= 1e-10, "max |rho - 1/(2 sqrt pi)| = " + num(worst));
  v.check(elapsed < 1.0, "100 centers in " + num(elapsed) + " s");
  const double e1 = std::abs(rho(make_weight("abs_pow:alpha=1"), 0.0) - oracle::kRhoAbsPow1);
  const double e3 = std::abs(rho(make_weight("abs_pow:alpha=3"), 0.0) - oracle::kRhoAbsPow3);
  v.check(e1 <= 1e-8 && e3 <= 1e-8, "|z|^alpha errors " + num(e1) + ", " + num(e3));
  return v;
}

Verdict ac2() {
  Verdict v;
  const WeightSpec w = make_weight("abs2");
  std::vector<cplx> centers;
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 5; ++i) centers.emplace_back(-6.0 + 3.0 * i, -4.5 + 3.0 * j);
  const std::vector<double> radii{1.5, 2, 4, 8};
  const GrowthReport g = growth_exponent(w, centers, radii);
  double worst = 0;
  for (const GrowthSample& s : g.samples) worst = std::max(worst, std::abs(s.mass - s.r * s.r) / (s.r * s.r));
  v.check(g.samples.size() == 80, std::to_string(g.samples.size()) + " samples");
  v.check(worst <= 1e-6, "max relative |mass - r^2| = " + num(worst));
  v.check(g.kappa_fit == 0.5, "kappa_fit = " + num(g.kappa_fit));
  return v;
}

Verdict ac3() {
  Verdict v;
  const auto t0 = Clock::now();
  const Rect domain{-10, -10, 10, 10};
  const Covering cov = build_covering(make_weight("abs2"), domain, 0.25);
  const std::size_t missing = uncovered_count(cov, cov.r0_effective, {domain, 200, 200});
  const std::vector<double> s{1, 2, 4, 8};
  const OverlapLadder ladder = overlap_ladder(cov, s, 200, 0.5, 0.3);
  const double elapsed = seconds_since(t0);
  v.check(missing == 0, std::to_string(missing) + " uncovered at r0_effective = " + num(cov.r0_effective));
  bool enveloped = true;
  for (const OverlapReport& r : ladder.rungs)
    enveloped = enveloped && static_cast<double>(r.n_measured) <=
                                 ladder.c_ov_fit * std::pow(1 + r.s, r.bound_exponent) * (1 + 1e-12);
  v.check(enveloped, "one c_ov_fit = " + num(ladder.c_ov_fit) + " bounds every rung");
  v.check(ladder.holds && ladder.fitted_exponent <= 3.1, "fitted exponent " + num(ladder.fitted_exponent));
  v.check(elapsed < 30, num(elapsed) + " s");
  return v;
}

Verdict ac4() {
  Verdict v;
  const WeightSpec w = make_weight("abs2");
  const Covering cov = build_covering(w, {-6, -6, 6, 6}, 0.25 - 1e-6);
  std::vector<double> rs{1, 2, 4, 8, 16}, sums;
  double exponent = 0;
  for (double r : rs) {
    const SummabilityReport rep = summability_sum(cov, w, 0.0, r, 4.0, 0.5);
    sums.push_back(rep.sum_value);
    exponent = rep.bound_exponent;
  }
  const AnchoredPowerFit fit = anchored_power_fit(rs, sums, exponent);
  bool monotone = true;
  for (std::size_t i = 1; i < sums.size(); ++i) monotone = monotone && sums[i] <= sums[i - 1];
  v.check(std::abs(exponent + 2.0 / 3.0) < 1e-12, "exponent " + num(exponent));
  v.check(fit.holds, "sum <= " + num(fit.constant) + " r^(-2/3)");
  v.check(monotone, "nonincreasing in r");
  const ErrorKind k = kind_of([&] { summability_sum(cov, w, 0.0, 1.0, 3.0, 0.5); });
  v.check(k == ErrorKind::ExponentTooSmall, std::string("m = 3 raises ") + to_string(k));
  return v;
}

Verdict ac5() {
  Verdict v;
  const WeightSpec w = make_weight("abs2");
  double worst = 0;
  for (double sigma : {1.0, 2.0, 4.0})
    worst = std::max(worst, std::abs(harmonic_approximation(w, {0.7, -0.3}, sigma).a_sigma - sigma * sigma / (4 * kPi)));
  v.check(worst <= 1e-6, "max |a_sigma - sigma^2/(4 pi)| = " + num(worst));
  double harmonic = 0;
  for (double sigma : {1.0, 2.0, 4.0})
    harmonic = std::max(harmonic, harmonic_approximation_at_scale(make_weight("re"), {1, 2}, sigma, 1.0).a_sigma);
  v.check(harmonic <= 1e-10, "Re z: a_sigma = " + num(harmonic));
  return v;
}

Verdict ac6() {
  Verdict v;
  auto t0 = Clock::now();
  const FockTruncation trunc = build_truncation(make_weight("abs2"), 20);
  for (std::size_t i = 0; i < 3; ++i) {
    const double radius = oracle::kOutsideDiskRadius[i];
    const SamplingConstant sc = sampling_constant(trunc, Region::complement(Region::disk(0.0, radius)));
    const double elapsed = seconds_since(t0);
    const double err = std::abs(sc.c_emp - oracle::kCEmpOutsideDisk[i]);
    v.check(err <= 1e-6 && elapsed < 60, "R = " + num(radius) + ": err " + num(err) + " in " + num(elapsed) + " s");
    t0 = Clock::now();
  }
  const double c = sampling_constant(trunc, Region::full()).c_emp;
  v.check(std::abs(c - 1) <= 1e-8, "E = C: c_emp = " + num(c));
  return v;
}

Verdict ac7() {
  Verdict v;
  const WeightSpec w = make_weight("abs2");
  const double rho0 = oracle::kRhoAbs2;
  std::vector<Region> family;
  for (double f : {0.1, 0.15, 0.2, 0.25, 0.3, 0.35}) family.push_back(Region::complement(Region::polka(rho0, f * rho0)));
  const FockTruncation trunc = build_truncation(w, 20);
  const std::vector<cplx> probes = probe_lattice(w, {-2, -2, 2, 2});
  const GammaExperiment ex = gamma_dependence_experiment(trunc, family, 2.0, 2.0, probes);
  v.check(ex.rows.size() == 6, std::to_string(ex.rows.size()) + " members");
  v.check(ex.strictly_increasing, "c_emp strictly increasing in gamma");
  v.check(ex.r_squared >= 0.9, "R^2 = " + num(ex.r_squared) + ", slope " + num(ex.log_slope));
  bool necessity = ex.necessity_const > 0;
  for (const GammaRow& r : ex.rows) necessity = necessity && r.gamma >= ex.necessity_const * r.c_emp * r.c_emp * (1 - 1e-12);
  v.check(necessity, "gamma >= " + num(ex.necessity_const) + " c_emp^2");
  return v;
}

Verdict ac8() {
  Verdict v;
  const std::vector<int> degrees{0, 1, 2, 3, 4, 5, 6, 7, 8};
  const std::vector<double> fracs{0.1, 0.25, 0.5, 0.9};
  const auto t0 = Clock::now();
  const RemezExperiment ex = remez_experiment({0.0, 1.0}, degrees, fracs, 10000);
  const double elapsed = seconds_since(t0);
  bool zero_exact = true;
  for (const RemezReport& r : ex.cells)
    if (r.n == 0) zero_exact = zero_exact && r.max_ratio == 1.0;
  v.check(zero_exact, "n = 0 ratio exactly 1");
  v.check(ex.holds, "single c = " + num(ex.fitted_c) + " bounds all 36 cells");
  v.check(elapsed < 300, "10^4 trials per cell in " + num(elapsed) + " s");

  // Homothety: matched seeds give the same ratios; independent seeds agree in distribution.
  RemezOptions keep;
  keep.keep_ratios = true;
  keep.mc_points = 20000;
  const std::vector<int> some{2, 5};
  const std::vector<double> quarter{0.25};
  const RemezExperiment a = remez_experiment({0.0, 1.0}, some, quarter, 1000, keep);
  const RemezExperiment b = remez_experiment({{3, -2}, 2.5}, some, quarter, 1000, keep);
  double drift = 0;
  for (std::size_t c = 0; c < a.cells.size(); ++c)
    for (std::size_t i = 0; i < a.cells[c].ratios.size(); ++i)
      drift = std::max(drift, std::abs(a.cells[c].ratios[i] / b.cells[c].ratios[i] - 1));
  v.check(drift <= 1e-9, "matched-seed ratio drift " + num(drift));
  keep.seed = 99;
  const RemezExperiment c = remez_experiment({{3, -2}, 2.5}, some, quarter, 1000, keep);
  // Two-sample Kolmogorov-Smirnov distance against its 0.1% critical value.
  double ks = 0;
  for (std::size_t k = 0; k < a.cells.size(); ++k) ks = std::max(ks, ks_distance(a.cells[k].ratios, c.cells[k].ratios));
  const double critical = 1.949 * std::sqrt(2.0 / 1000.0);
  v.check(ks < critical, "independent-seed KS distance " + num(ks) + " < " + num(critical));
  return v;
}

Verdict ac9() {
  Verdict v;
  const WeightSpec w = make_weight("abs2");
  const Covering cov = build_covering(w, {-6, -6, 6, 6}, 0.25);
  const FockTruncation trunc = build_truncation(w, 20);
  std::vector<std::vector<cplx>> coeffs;
  for (std::size_t k = 0; k < 20; ++k) coeffs.push_back(random_unit_coefficients(trunc.dim(), 1, k));
  const std::vector<GoodDiskReport> reps = good_disk_classification_batch(trunc, cov, coeffs, 1.0, 2.0);
  std::size_t ok = 0;
  double worst = 1e300;
  for (const GoodDiskReport& r : reps) {
    ok += r.holds && r.captured_fraction >= 0.5 ? 1 : 0;
    worst = std::min(worst, r.captured_fraction);
  }
  v.check(reps.size() == 20 && reps.front().t == 4.0, "t = 4, K = " + num(reps.front().k) + ", N(t) = " +
                                                          std::to_string(reps.front().n_overlap));
  v.check(ok == 20, std::to_string(ok) + "/20 capture >= 1/2 (min " + num(worst) + ")");
  return v;
}

Verdict ac10() {
  Verdict v;
  const FockTruncation trunc = build_truncation(make_weight("abs2"), 20);
  const ToeplitzTruncation one = assemble_toeplitz(trunc, SymbolFunction::constant(1.0));
  const InvertibilityReport r1 = invertibility_check(trunc, one, 1.0, 1.0);
  v.check(std::abs(r1.inv_norm - 1) <= 1e-8 && r1.bound == 1.0 && r1.bound_scaled == 1.0,
          "v = 1: inv_norm " + num(r1.inv_norm) + ", bound " + num(r1.bound));
  struct Case {
    const char* symbol;
    double level;
  };
  const Case cases[] = {
      {"mix(0.3,1,complement(disk(0,0,1)))", 0.3},
      {"mix(0.5,2,complement(disk(0.5,0,1.5)))", 1.0},
      {"mix(0.2,1,complement(polka(pitch=0.5,dot=0.1)))", 0.5},
      {"mix(0.4,1,halfplane(-0.5))", 0.4},
      {"mix(0.1,3,union(disk(0,0,0.5),complement(disk(0,0,1.5))))", 1.0},
  };
  for (const Case& c : cases) {
    const ToeplitzTruncation t = assemble_toeplitz(trunc, parse_symbol(c.symbol));
    const InvertibilityReport r = invertibility_check(trunc, t, c.level);
    v.check(r.holds && r.intermediate_holds, std::string(c.symbol) + ": inv_norm " + num(r.inv_norm) + " <= " +
                                                 num(r.bound_scaled) + ", " + num(r.intermediate_lhs) +
                                                 " <= " + num(r.intermediate_rhs));
  }
  return v;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Relative path -> contents for every file under a directory.
std::vector<std::pair<std::string, std::string>> tree(const fs::path& dir) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) out.emplace_back(fs::relative(e.path(), dir).string(), slurp(e.path()));
  std::sort(out.begin(), out.end());
  return out;
}

Verdict ac11(const std::string& cli, const std::string& golden, const std::string& work) {
  Verdict v;
  std::vector<fs::path> configs;
  for (const auto& e : fs::directory_iterator(golden))
    if (e.path().extension() == ".cfg") configs.push_back(e.path());
  std::sort(configs.begin(), configs.end());
  v.check(!configs.empty(), std::to_string(configs.size()) + " golden configs");
  for (const fs::path& cfg : configs) {
    const std::string stem = cfg.stem().string();
    const std::string sub = stem.substr(0, stem.find('.'));
    int codes[2];
    for (int run = 0; run < 2; ++run) {
      const fs::path out = fs::path(work) / stem / ("run" + std::to_string(run));
      fs::remove_all(out);
      const std::string cmd = "\"" + cli + "\" " + sub + " --config \"" + cfg.string() + "\" --out \"" +
                              out.string() + "\" > /dev/null 2>&1";
      codes[run] = std::system(cmd.c_str());
    }
    const fs::path base = fs::path(work) / stem;
    const bool produced = fs::exists(base / "run0" / "report.json");
    const bool same = produced && codes[0] == codes[1] && tree(base / "run0") == tree(base / "run1");
    v.check(same, stem + (same ? " identical" : " differs"));
  }
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dfock acceptance criteria"};
  std::string cli, golden, work = "acceptance_work";
  std::vector<std::string> only;
  app.add_option("--cli", cli, "path to the dfock executable")->required();
  app.add_option("--golden", golden, "directory of golden configs")->required();
  app.add_option("--work", work, "scratch directory");
  app.add_option("--only", only, "run only these criteria (e.g. AC3)");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"AC1", ac1},
      {"AC2", ac2},
      {"AC3", ac3},
      {"AC4", ac4},
      {"AC5", ac5},
      {"AC6", ac6},
      {"AC7", ac7},
      {"AC8", ac8},
      {"AC9", ac9},
      {"AC10", ac10},
      {"AC11", [&] { return ac11(cli, golden, work); }},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), name) == only.end()) continue;
    const auto t0 = Clock::now();
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v.check(false, std::string("exception: ") + e.what());
    }
    if (!v.pass) ++failures;
    std::cout << name << ' ' << (v.pass ? "PASS" : "FAIL") << " (" << num(seconds_since(t0)) << " s) " << v.text()
              << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
