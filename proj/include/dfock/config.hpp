#pragma once

// Run configuration: a flat key = value file whose keys double as CLI flags
// (underscores become dashes). Lines starting with '#' are comments.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dfock/types.hpp"

namespace dfock {

struct RunConfig {
  // weight and sets
  std::string weight = "abs2";
  std::string region = "full()";
  std::string family;  // ';'-separated regions for the gamma ladder
  std::string symbol = "const(1)";
  cplx z{0, 0};

  // covering
  double delta = 0.25;
  Rect domain{-6, -6, 6, 6};
  std::vector<double> s_ladder{1, 2, 4, 8};
  double s = 1;
  std::size_t probe_n = 200;
  double kappa = 0.5;
  double epsilon = 0.3;
  double m = 4;
  std::vector<double> r_ladder{1, 2, 4, 8, 16};
  std::vector<double> sigma_ladder{1, 2, 4};
  std::vector<double> radii{1.5, 2, 4, 8};
  std::size_t centers = 20;

  // density and sampling
  std::size_t samples_per_disk = 4096;
  double probe_pitch = 0.5;
  int n_max = 20;
  double p = 2;
  double r = 2;
  std::vector<double> lambdas{1, 1, 1};
  double c = 2.718281828459045;
  std::size_t lp_trials = 64;
  double c_frac = 0.5;
  std::size_t test_functions = 20;

  // remez
  std::vector<int> degree_ladder{0, 1, 2, 3, 4, 5, 6, 7, 8};
  std::vector<double> s_fracs{0.1, 0.25, 0.5, 0.9};
  std::size_t trials = 10000;
  std::size_t mc_points = 100000;
  Disk disk{{0, 0}, 1};

  // toeplitz
  double level = 0.5;
  std::optional<double> big_c;  // "auto" when empty
  std::vector<double> levels;

  // run control and tolerances
  std::uint64_t seed = 1;
  std::string out;
  double rho_tol = 1e-10;
  double tail_tol = 1e-10;
  std::size_t radial_panels = 128;
  std::size_t panel_points = 8;
  std::size_t angular_nodes = 2048;
  std::size_t area_samples = 200000;

  bool operator==(const RunConfig& other) const { return serialize() == other.serialize(); }

  /// Sets one key from its text form; throws ConfigParseError.
  void set_field(std::string_view key, std::string_view value);
  /// Every key in declaration order, one "key = value" line each.
  std::string serialize() const;
};

std::vector<std::string> config_keys();
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

}  // namespace dfock
