#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>

namespace dfock {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Axis-aligned rectangle [x0,x1] x [y0,y1]. A zero-width side is allowed and
/// describes a degenerate (segment or point) domain.
struct Rect {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
  bool valid() const { return x1 >= x0 && y1 >= y0; }
  bool contains(cplx z) const {
    return z.real() >= x0 && z.real() <= x1 && z.imag() >= y0 && z.imag() <= y1;
  }
  cplx center() const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }
  Rect shrunk(double margin) const { return {x0 + margin, y0 + margin, x1 - margin, y1 - margin}; }
  /// Distance from an interior point to the nearest side; 0 outside.
  double inner_distance(cplx z) const {
    if (!contains(z)) return 0.0;
    return std::min({z.real() - x0, x1 - z.real(), z.imag() - y0, y1 - z.imag()});
  }
  bool operator==(const Rect&) const = default;
};

/// Regular nx-by-ny lattice of points spanning a rectangle, endpoints
/// included. A single row or column sits on the box's lower edge.
struct GridSpec {
  Rect box;
  std::size_t nx = 0, ny = 0;

  std::size_t size() const { return nx * ny; }
  cplx point(std::size_t i, std::size_t j) const {
    const double x = nx > 1 ? box.x0 + box.width() * static_cast<double>(i) / static_cast<double>(nx - 1) : box.x0;
    const double y = ny > 1 ? box.y0 + box.height() * static_cast<double>(j) / static_cast<double>(ny - 1) : box.y0;
    return {x, y};
  }
};

struct Disk {
  cplx center{0.0, 0.0};
  double radius = 1.0;

  double area() const { return kPi * radius * radius; }
  bool contains(cplx z) const { return std::abs(z - center) < radius; }
};

}  // namespace dfock
