#pragma once

// Finite-dimensional models of the Fock space F^2_w for radial weights:
// orthonormal monomials, masked Gram matrices M_E, sampling constants, the
// theorem's bound evaluator, and the K-good disk classification.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "dfock/covering.hpp"
#include "dfock/regions.hpp"
#include "dfock/weights.hpp"

namespace dfock {

struct TruncationOptions {
  double tail_tol = 1e-10;           // tail mass of every basis function beyond r_cut
  std::size_t radial_panels = 128;   // equal Gauss-Legendre panels on [0, r_cut]
  std::size_t panel_points = 8;
  std::size_t angular_nodes = 2048;  // equispaced
  std::size_t area_check_samples = 200000;
  std::uint64_t seed = 1;
};

/// e_j(z) = z^j / n_j with n_j^2 = int |z|^{2j} e^{-2w} dA, j = 0..n_max.
struct FockTruncation {
  WeightSpec w;
  int n_max = 0;
  std::vector<double> log_norm;  // ln n_j
  double r_cut = 0;
  double max_tail = 0;  // largest relative tail beyond r_cut over j
  TruncationOptions options;

  std::size_t dim() const { return static_cast<std::size_t>(n_max) + 1; }
  /// |e_j(s)| e^{-w(s)} at |z| = s.
  double weighted_modulus(int j, double s) const;
  nlohmann::json to_json() const;
};

FockTruncation build_truncation(const WeightSpec& w, int n_max, const TruncationOptions& options = {});

/// Symbol taking value `outside` off E and `inside` on E; both >= 0.
struct PiecewiseSymbol {
  Region e = Region::full();
  double outside = 0;
  double inside = 1;
};

struct MaskedGram {
  Eigen::MatrixXcd m;        // Hermitian, int v e_j conj(e_k) e^{-2w} dA
  double masked_area = 0;    // quadrature area of E within the cutoff disk
  double mc_area = 0;        // Monte Carlo area of the same set
  double mc_std_error = 0;
  std::size_t tensor_nodes = 0;
  std::size_t straddling_cells = 0;
  std::size_t scattered_nodes = 0;
};

/// Tensor polar quadrature (radial breakpoints of E become panel edges);
/// cells whose corners disagree on membership are refined 4x4 once.
/// Throws QuadratureUnderResolved when the masked area of E leaves 3
/// standard errors (plus a floor) of its Monte Carlo area.
MaskedGram assemble_masked(const FockTruncation& trunc, const PiecewiseSymbol& v);

struct SamplingConstant {
  double c_emp = 0;  // sqrt(lambda_min(M_E)) for p = 2; random-search upper bound otherwise
  double lambda_min = 0;
  double lambda_max = 0;
  double p_exp = 2;
  bool upper_bound_only = false;
  MaskedGram gram;
};

SamplingConstant sampling_constant(const FockTruncation& trunc, const Region& e);

/// p != 2: min over random unit coefficient vectors of ||f||_{L^p(E)} / ||f||_p.
SamplingConstant sampling_constant_lp(const FockTruncation& trunc, const Region& e, double p_exp, std::size_t trials,
                                      std::uint64_t seed);

struct TheoreticalBound {
  double l_eval = 0;      // lambda r^{1/kappa} + (lambda' + lambda'' ln(1+r)) / p
  double bound_eval = 0;  // (gamma/c)^L
  bool base_exceeds_one = false;
};

TheoreticalBound theoretical_bound(double gamma, double r, double p_exp, double kappa, const double (&lambdas)[3],
                                   double c);

struct SamplingReport {
  std::string region;
  double gamma = 0;
  double gamma_half_width = 0;
  double r = 0;
  double p_exp = 2;
  double c_emp = 0;
  bool upper_bound_only = false;
  double kappa = 0;
  double lambdas[3] = {1, 1, 1};
  double c = 0;
  TheoreticalBound bound;
  int n_max = 0;
  std::uint64_t seed = 0;
  double masked_area = 0;
  double mc_area = 0;

  nlohmann::json to_json() const;
};

struct GammaRow {
  std::string region;
  double gamma = 0;
  double gamma_half_width = 0;
  double c_emp = 0;
};

struct GammaExperiment {
  std::vector<GammaRow> rows;  // sorted by gamma
  double log_slope = 0;        // d log c_emp / d log gamma
  double r_squared = 0;
  double necessity_const = 0;  // min gamma / c_emp^p
  bool strictly_increasing = false;
};

GammaExperiment gamma_dependence_experiment(const FockTruncation& trunc, std::span<const Region> family, double r,
                                            double p_exp, std::span<const cplx> probes,
                                            const DensityOptions& density_options = {});

struct GoodDiskReport {
  double s = 0;
  double t = 0;
  double p_exp = 2;
  double c_frac = 0.5;
  std::size_t n_overlap = 0;  // N(t)
  double k = 0;
  std::vector<std::size_t> good_indices;
  std::size_t disks = 0;
  double total_norm_p = 0;  // ||f||^p
  double captured_fraction = 0;
  bool holds = false;  // captured_fraction >= c_frac

  nlohmann::json to_json() const;
};

struct GoodDiskOptions {
  double c_frac = 0.5;
  std::optional<double> k;  // default K = (N(t) / (1 - c_frac))^{1/p}
  std::size_t overlap_probe_n = 200;
  std::size_t disk_radial = 12;
  std::size_t disk_angular = 48;
};

GoodDiskReport good_disk_classification(const FockTruncation& trunc, const Covering& cov,
                                        std::span<const cplx> coefficients, double s, double p_exp,
                                        const GoodDiskOptions& options = {});

/// Several coefficient vectors against one covering; node geometry and
/// weight factors are shared across functions.
std::vector<GoodDiskReport> good_disk_classification_batch(const FockTruncation& trunc, const Covering& cov,
                                                           const std::vector<std::vector<cplx>>& coefficients,
                                                           double s, double p_exp,
                                                           const GoodDiskOptions& options = {});

/// int_{D(center, radius)} |f|^p e^{-p w} dA for f = sum_j c_j e_j.
double local_norm_p(const FockTruncation& trunc, std::span<const cplx> coefficients, cplx center, double radius,
                    double p_exp, std::size_t radial_nodes = 12, std::size_t angular_nodes = 48);

/// Seeded complex Gaussian coefficient vector of unit Euclidean norm.
std::vector<cplx> random_unit_coefficients(std::size_t dim, std::uint64_t seed, std::uint64_t counter);

}  // namespace dfock
