#pragma once

// rho-separated nets covering a rectangle, their overlap and cardinality
// counts, the summability sums over a net, and local harmonic approximation
// of the weight on adapted disks.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "dfock/types.hpp"
#include "dfock/weights.hpp"

namespace dfock {

/// Uniform-cell spatial index over a fixed point set. Points are stored in
/// (cell_y, cell_x) order so every row of cells is one contiguous span.
class CenterIndex {
 public:
  CenterIndex() = default;
  CenterIndex(std::span<const cplx> centers, std::span<const double> rho, double cell);

  std::size_t size() const { return cx_.size(); }
  bool empty() const { return cx_.empty(); }

  /// Calls f(begin, end) for each row span of cells meeting the box
  /// [x0,x1] x [y0,y1]; indices refer to the sorted arrays below.
  template <class F>
  void for_each_span(double x0, double y0, double x1, double y1, F&& f) const {
    if (empty()) return;
    const long i0 = clamp_x(x0), i1 = clamp_x(x1);
    const long j0 = clamp_y(y0), j1 = clamp_y(y1);
    for (long j = j0; j <= j1; ++j) {
      const std::size_t row = static_cast<std::size_t>(j) * nx_;
      const std::uint32_t b = cell_start_[row + static_cast<std::size_t>(i0)];
      const std::uint32_t e = cell_start_[row + static_cast<std::size_t>(i1) + 1];
      if (b < e) f(b, e);
    }
  }

  const double* cx() const { return cx_.data(); }
  const double* cy() const { return cy_.data(); }
  const double* rho2() const { return rho2_.data(); }
  const double* inv_rho2() const { return inv_rho2_.data(); }
  std::uint32_t original(std::size_t sorted) const { return order_[sorted]; }

 private:
  long clamp_x(double x) const;
  long clamp_y(double y) const;

  double x0_ = 0, y0_ = 0, cell_ = 1;
  std::size_t nx_ = 0, ny_ = 0;
  std::vector<std::uint32_t> cell_start_;
  std::vector<double> cx_, cy_, rho2_, inv_rho2_;
  std::vector<std::uint32_t> order_;
};

struct Covering {
  std::string weight_name;
  std::vector<cplx> centers;  // raster (Im, Re) acceptance order
  std::vector<double> rho;    // rho(a_k)
  double delta = 0.25;
  Rect domain;
  double r0_effective = 0;  // every domain point lies in some D^{r0_effective}(a_k)
  double candidate_pitch = 0;
  std::size_t candidates = 0;
  double rho_min = 0, rho_max = 0;
  CenterIndex index;

  std::size_t size() const { return centers.size(); }
  std::string csv() const;  // k,re,im,rho
  nlohmann::json summary_json() const;
};

struct CoveringOptions {
  RhoOptions rho;
  std::size_t max_candidates = 6'000'000;
};

/// Greedy maximal delta-separated net: candidates on a raster lattice are
/// scanned in (Im, Re) order and kept when
/// |c - a| >= delta * max(rho(a), rho(c)) for every kept a.
Covering build_covering(const WeightSpec& w, const Rect& domain, double delta, const CoveringOptions& options = {});

/// Number of probe points covered by no disk D^s(a_k).
std::size_t uncovered_count(const Covering& cov, double s, const GridSpec& probes);

/// max_k |a_i - a_j| / max(rho_i, rho_j) violations; returns the smallest
/// separation ratio min |a_i - a_j| / max(rho_i, rho_j) over all pairs.
double min_separation_ratio(const Covering& cov);

struct OverlapReport {
  double s = 0;
  std::size_t n_measured = 0;
  double mean_count = 0;
  double kappa = 0;
  double epsilon = 0;
  double bound_exponent = 0;  // 1 + 1/kappa + kappa*epsilon/(1+kappa)
  double c_ov_fit = 0;        // n_measured / (1+s)^bound_exponent
  std::size_t probes = 0;

  nlohmann::json to_json() const;
};

/// Probe grid shrunk by the largest disk radius s*rho_max, nx-by-ny.
GridSpec interior_probe_grid(const Covering& cov, double s, std::size_t n);

OverlapReport overlap_count(const Covering& cov, double s, const GridSpec& probes, double kappa, double epsilon);

struct OverlapLadder {
  std::vector<OverlapReport> rungs;
  double c_ov_fit = 0;         // max_s n(s) / (1+s)^bound_exponent
  double fitted_exponent = 0;  // least-squares slope of log n vs log(1+s)
  bool holds = false;          // fitted_exponent <= bound_exponent
};

OverlapLadder overlap_ladder(const Covering& cov, std::span<const double> s_values, std::size_t probe_n, double kappa,
                             double epsilon);

struct CardinalityReport {
  std::size_t count = 0;
  bool boundary_truncated = false;  // D^s(z) leaves the covering domain
};

/// #{k : a_k in D^s(z)}.
CardinalityReport cardinality_in_disk(const Covering& cov, const WeightSpec& w, cplx z, double s,
                                      const RhoOptions& options = {});

struct SummabilityReport {
  cplx z;
  double r = 0;
  double m = 0;
  double kappa = 0;
  double sum_value = 0;
  double truncation_tail_bound = 0;
  std::size_t terms = 0;
  double bound_exponent = 0;  // 1/kappa - m/(1+kappa)

  nlohmann::json to_json() const;
};

SummabilityReport summability_sum(const Covering& cov, const WeightSpec& w, cplx z, double r, double m, double kappa,
                                  const RhoOptions& options = {});

struct HarmonicOptions {
  int degree = 6;
  std::size_t radial_nodes = 24;
  std::size_t angular_nodes = 64;
  std::size_t check_radial = 33;
  std::size_t check_angular = 256;
  double max_condition = 1e10;
};

struct HarmonicApprox {
  cplx center;
  double sigma = 0;
  double radius = 0;  // sigma * rho(center); the fit variable is u = (z - center)/radius
  int degree = 0;
  std::vector<double> h_re;                // coefficient of Re u^j, j = 1..degree
  std::vector<double> h_im;                // coefficient of Im u^j
  std::vector<cplx> holo_completion;       // H(u) = sum_j H_j u^j with Re H = h, H_0 = 0
  double a_sigma = 0;                      // sup |w - w(center) - h| on the check grid
  double condition = 0;

  /// h at a point z of the plane.
  double h(cplx z) const;
  nlohmann::json to_json() const;
};

HarmonicApprox harmonic_approximation(const WeightSpec& w, cplx center, double sigma,
                                      const HarmonicOptions& options = {}, const RhoOptions& rho_options = {});

/// Same fit with rho(center) supplied, for weights whose mu vanishes.
HarmonicApprox harmonic_approximation_at_scale(const WeightSpec& w, cplx center, double sigma, double rho_center,
                                               const HarmonicOptions& options = {});

}  // namespace dfock
