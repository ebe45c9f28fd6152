#include "dfock/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include <Eigen/Eigenvalues>

#include "dfock/errors.hpp"

namespace dfock {
namespace {

const QuadratureRule& reference_rule(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, QuadratureRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  Eigen::VectorXd diag = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  Eigen::VectorXd sub(static_cast<Eigen::Index>(n > 0 ? n - 1 : 0));
  for (std::size_t k = 1; k < n; ++k) {
    const double kk = static_cast<double>(k);
    sub[static_cast<Eigen::Index>(k - 1)] = kk / std::sqrt(4 * kk * kk - 1);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  QuadratureRule rule;
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const double v = solver.eigenvectors()(0, ii);
    rule.nodes.push_back(solver.eigenvalues()[ii]);
    rule.weights.push_back(2 * v * v);
  }
  // Symmetrize to remove eigen-solver round-off.
  for (std::size_t i = 0; i < n / 2; ++i) {
    const std::size_t j = n - 1 - i;
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    rule.weights[i] = rule.weights[j] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return cache.emplace(n, std::move(rule)).first->second;
}

}  // namespace

QuadratureRule gauss_legendre(std::size_t n, double a, double b) {
  require(n >= 1, ErrorKind::InvalidArgument, "gauss_legendre: need at least one node");
  const QuadratureRule& ref = reference_rule(n);
  QuadratureRule out;
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  for (std::size_t i = 0; i < n; ++i) {
    out.nodes.push_back(mid + half * ref.nodes[i]);
    out.weights.push_back(half * ref.weights[i]);
  }
  return out;
}

QuadratureRule composite_gauss_legendre(std::vector<double> edges, std::size_t points) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  QuadratureRule out;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const QuadratureRule panel = gauss_legendre(points, edges[p], edges[p + 1]);
    out.nodes.insert(out.nodes.end(), panel.nodes.begin(), panel.nodes.end());
    out.weights.insert(out.weights.end(), panel.weights.begin(), panel.weights.end());
  }
  return out;
}

}  // namespace dfock
