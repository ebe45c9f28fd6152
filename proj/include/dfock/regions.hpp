#pragma once

// Measurable planar sets as immutable expression trees, and the relative
// density of a set in adapted disks D^r(z).

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dfock/types.hpp"
#include "dfock/weights.hpp"

namespace dfock {

/// All primitives are open sets; boolean nodes combine indicators.
///   disk(cx,cy,r)                 |z - c| < r
///   rect(x0,y0,x1,y1)             x0 < x < x1, y0 < y < y1
///   halfplane(c[,theta])          Re(z e^{-i theta}) > c
///   polka(pitch,dot[,ox,oy])      within dot of the lattice (ox,oy) + pitch Z^2
///   sector(cx,cy,r0,r1,th0,th1)   r0 < |z-c| < r1, arg(z-c) - th0 in (0, th1-th0) mod 2 pi
class Region {
 public:
  enum class Kind { Full, Empty, Disk, Rect, HalfPlane, Polka, Sector, Complement, Union, Intersection };

  static Region full();
  static Region empty();
  static Region disk(cplx center, double radius);
  static Region rect(const Rect& box);
  static Region halfplane(double c, double theta = 0.0);
  static Region polka(double pitch, double dot, double ox = 0.0, double oy = 0.0);
  static Region sector(cplx center, double r0, double r1, double th0, double th1);
  static Region complement(const Region& a);
  static Region unite(std::vector<Region> parts);
  static Region intersect(std::vector<Region> parts);

  Kind kind() const;
  bool contains(cplx z) const;
  /// out[i] = 1 when (x[i], y[i]) lies in the set.
  void indicator(const double* x, const double* y, std::size_t n, std::uint8_t* out) const;

  /// Exact area for bounded primitives (and the empty set).
  std::optional<double> closed_form_area() const;
  /// Box containing the set when it is bounded.
  std::optional<Rect> bounding_box() const;
  /// Radii of circles centered at the origin that appear as boundaries.
  std::vector<double> radial_breakpoints() const;
  /// True when membership depends only on |z|.
  bool is_radial() const;

  /// Canonical expression; parse_region(to_string()) reproduces the tree.
  std::string to_string() const;

  struct Node;

 private:
  explicit Region(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

Region parse_region(std::string_view text);

struct AreaEstimate {
  double area = 0;
  double std_error = 0;
  std::size_t samples = 0;
};

/// Uniform Monte Carlo area of E within a box.
AreaEstimate monte_carlo_area(const Region& e, const Rect& box, std::size_t samples, std::uint64_t seed);

struct DensityOptions {
  std::size_t samples_per_disk = 4096;
  std::uint64_t seed = 1;
};

struct ProbeDensity {
  cplx z;
  double fraction = 0;
  double std_error = 0;
};

struct DensityReport {
  double gamma = 0;
  double r = 0;
  cplx witness_z;
  double std_error = 0;   // at the witness
  double half_width = 0;  // 3 standard errors
  std::size_t samples_per_disk = 0;
  std::uint64_t seed = 0;
  std::vector<ProbeDensity> per_probe;

  nlohmann::json to_json() const;
};

/// Stratified estimate of |E cap D^r(z)| / |D^r(z)| at each probe, minimized
/// over the probes. Probe k always uses the substream (seed, Density, k), so
/// two sets on the same probes share their random points.
DensityReport density(const Region& e, const WeightSpec& w, double r, std::span<const cplx> probes,
                      const DensityOptions& options = {}, const RhoOptions& rho_options = {});

/// Same estimate with rho supplied per probe.
DensityReport density_with_rho(const Region& e, double r, std::span<const cplx> probes,
                               std::span<const double> rho_values, const DensityOptions& options = {});

/// Lattice at pitch pitch_factor * rho_min over the domain.
std::vector<cplx> probe_lattice(const WeightSpec& w, const Rect& domain, double pitch_factor = 0.5,
                                const RhoOptions& rho_options = {});

struct RenormalizedDensity {
  double gamma = 0;        // input density at radius r
  double r = 0;
  double gamma_tilde = 0;  // measured at radius 1
  DensityReport report;
};

RenormalizedDensity renormalize_density(double gamma, double r, const Region& e, const WeightSpec& w,
                                        std::span<const cplx> probes, const DensityOptions& options = {},
                                        const RhoOptions& rho_options = {});

}  // namespace dfock
