#include <algorithm>
#include <cmath>
#include <numeric>

#include "dfock/covering.hpp"
#include "dfock/errors.hpp"

namespace dfock {

CenterIndex::CenterIndex(std::span<const cplx> centers, std::span<const double> rho, double cell) {
  require(centers.size() == rho.size(), ErrorKind::InvalidArgument, "CenterIndex: size mismatch");
  require(cell > 0, ErrorKind::InvalidArgument, "CenterIndex: cell must be positive");
  if (centers.empty()) return;

  double x1 = centers[0].real(), y1 = centers[0].imag();
  x0_ = x1;
  y0_ = y1;
  for (const cplx& c : centers) {
    x0_ = std::min(x0_, c.real());
    y0_ = std::min(y0_, c.imag());
    x1 = std::max(x1, c.real());
    y1 = std::max(y1, c.imag());
  }
  cell_ = cell;
  nx_ = static_cast<std::size_t>(std::floor((x1 - x0_) / cell)) + 1;
  ny_ = static_cast<std::size_t>(std::floor((y1 - y0_) / cell)) + 1;

  const std::size_t n = centers.size();
  std::vector<std::size_t> key(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(clamp_x(centers[k].real()));
    const auto j = static_cast<std::size_t>(clamp_y(centers[k].imag()));
    key[k] = j * nx_ + i;
  }
  order_.resize(n);
  std::iota(order_.begin(), order_.end(), 0u);
  std::stable_sort(order_.begin(), order_.end(), [&](std::uint32_t a, std::uint32_t b) { return key[a] < key[b]; });

  cell_start_.assign(nx_ * ny_ + 1, 0);
  for (std::size_t k = 0; k < n; ++k) ++cell_start_[key[k] + 1];
  std::partial_sum(cell_start_.begin(), cell_start_.end(), cell_start_.begin());

  cx_.resize(n);
  cy_.resize(n);
  rho2_.resize(n);
  inv_rho2_.resize(n);
  for (std::size_t s = 0; s < n; ++s) {
    const std::uint32_t k = order_[s];
    cx_[s] = centers[k].real();
    cy_[s] = centers[k].imag();
    rho2_[s] = rho[k] * rho[k];
    inv_rho2_[s] = 1.0 / rho2_[s];
  }
}

long CenterIndex::clamp_x(double x) const {
  const double c = std::floor((x - x0_) / cell_);
  return static_cast<long>(std::clamp(c, 0.0, static_cast<double>(nx_ - 1)));
}

long CenterIndex::clamp_y(double y) const {
  const double c = std::floor((y - y0_) / cell_);
  return static_cast<long>(std::clamp(c, 0.0, static_cast<double>(ny_ - 1)));
}

}  // namespace dfock
