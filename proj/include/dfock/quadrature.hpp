#pragma once

#include <cstddef>
#include <vector>

namespace dfock {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [a,b] (Golub-Welsch).
QuadratureRule gauss_legendre(std::size_t n, double a = -1.0, double b = 1.0);

/// Composite Gauss-Legendre rule: `points` nodes on each panel between
/// consecutive sorted, deduplicated edges.
QuadratureRule composite_gauss_legendre(std::vector<double> edges, std::size_t points);

}  // namespace dfock
