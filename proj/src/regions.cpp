#include "dfock/regions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "dfock/errors.hpp"
#include "dfock/kernels.hpp"
#include "dfock/rng.hpp"

namespace dfock {

struct Region::Node {
  Kind kind;
  std::vector<double> p;  // primitive parameters in declaration order
  std::vector<std::shared_ptr<const Node>> children;
};

namespace {

using NodePtr = std::shared_ptr<const Region::Node>;

double wrap_angle(double a) {
  a = std::fmod(a, 2 * kPi);
  return a < 0 ? a + 2 * kPi : a;
}

bool node_contains(const Region::Node& n, cplx z) {
  using K = Region::Kind;
  switch (n.kind) {
    case K::Full: return true;
    case K::Empty: return false;
    case K::Disk: {
      const double dx = z.real() - n.p[0], dy = z.imag() - n.p[1];
      return dx * dx + dy * dy < n.p[2] * n.p[2];
    }
    case K::Rect: return z.real() > n.p[0] && z.real() < n.p[2] && z.imag() > n.p[1] && z.imag() < n.p[3];
    case K::HalfPlane: return z.real() * std::cos(n.p[1]) + z.imag() * std::sin(n.p[1]) > n.p[0];
    case K::Polka: {
      const double inv = 1.0 / n.p[0];
      const double sx = z.real() - n.p[2], sy = z.imag() - n.p[3];
      const double dx = sx - std::nearbyint(sx * inv) * n.p[0];
      const double dy = sy - std::nearbyint(sy * inv) * n.p[0];
      return dx * dx + dy * dy < n.p[1] * n.p[1];
    }
    case K::Sector: {
      const cplx d = z - cplx(n.p[0], n.p[1]);
      const double rr = std::abs(d);
      if (!(rr > n.p[2] && rr < n.p[3])) return false;
      const double span = n.p[5] - n.p[4];
      if (span >= 2 * kPi) return true;
      const double a = wrap_angle(std::arg(d) - n.p[4]);
      return a > 0 && a < span;
    }
    case K::Complement: return !node_contains(*n.children[0], z);
    case K::Union:
      for (const auto& c : n.children)
        if (node_contains(*c, z)) return true;
      return false;
    case K::Intersection:
      for (const auto& c : n.children)
        if (!node_contains(*c, z)) return false;
      return true;
  }
  return false;
}

void node_indicator(const Region::Node& n, const double* x, const double* y, std::size_t count, std::uint8_t* out) {
  using K = Region::Kind;
  const auto& k = kernels::active();
  switch (n.kind) {
    case K::Full: std::fill(out, out + count, std::uint8_t{1}); return;
    case K::Empty: std::fill(out, out + count, std::uint8_t{0}); return;
    case K::Disk: k.disk_indicator(x, y, count, n.p[0], n.p[1], n.p[2] * n.p[2], out); return;
    case K::Polka: k.polka_indicator(x, y, count, n.p[2], n.p[3], n.p[0], n.p[1] * n.p[1], out); return;
    case K::Complement:
      node_indicator(*n.children[0], x, y, count, out);
      for (std::size_t i = 0; i < count; ++i) out[i] ^= 1;
      return;
    case K::Union:
    case K::Intersection: {
      node_indicator(*n.children[0], x, y, count, out);
      std::vector<std::uint8_t> tmp(count);
      for (std::size_t c = 1; c < n.children.size(); ++c) {
        node_indicator(*n.children[c], x, y, count, tmp.data());
        if (n.kind == K::Union)
          for (std::size_t i = 0; i < count; ++i) out[i] |= tmp[i];
        else
          for (std::size_t i = 0; i < count; ++i) out[i] &= tmp[i];
      }
      return;
    }
    default:
      for (std::size_t i = 0; i < count; ++i) out[i] = node_contains(n, {x[i], y[i]}) ? 1 : 0;
  }
}

std::optional<Rect> node_box(const Region::Node& n) {
  using K = Region::Kind;
  switch (n.kind) {
    case K::Empty: return Rect{0, 0, 0, 0};
    case K::Disk: return Rect{n.p[0] - n.p[2], n.p[1] - n.p[2], n.p[0] + n.p[2], n.p[1] + n.p[2]};
    case K::Rect: return Rect{n.p[0], n.p[1], n.p[2], n.p[3]};
    case K::Sector: return Rect{n.p[0] - n.p[3], n.p[1] - n.p[3], n.p[0] + n.p[3], n.p[1] + n.p[3]};
    case K::Union: {
      std::optional<Rect> acc;
      for (const auto& c : n.children) {
        const auto b = node_box(*c);
        if (!b) return std::nullopt;
        if (c->kind == K::Empty) continue;
        acc = acc ? Rect{std::min(acc->x0, b->x0), std::min(acc->y0, b->y0), std::max(acc->x1, b->x1),
                         std::max(acc->y1, b->y1)}
                  : *b;
      }
      return acc ? acc : Rect{0, 0, 0, 0};
    }
    case K::Intersection: {
      std::optional<Rect> acc;
      for (const auto& c : n.children) {
        const auto b = node_box(*c);
        if (!b) continue;
        acc = acc ? Rect{std::max(acc->x0, b->x0), std::max(acc->y0, b->y0), std::min(acc->x1, b->x1),
                         std::min(acc->y1, b->y1)}
                  : *b;
      }
      if (acc && !acc->valid()) return Rect{0, 0, 0, 0};
      return acc;
    }
    default: return std::nullopt;
  }
}

void node_breakpoints(const Region::Node& n, std::vector<double>& out) {
  using K = Region::Kind;
  if (n.kind == K::Disk && n.p[0] == 0 && n.p[1] == 0) out.push_back(n.p[2]);
  if (n.kind == K::Sector && n.p[0] == 0 && n.p[1] == 0) {
    if (n.p[2] > 0) out.push_back(n.p[2]);
    out.push_back(n.p[3]);
  }
  for (const auto& c : n.children) node_breakpoints(*c, out);
}

bool node_radial(const Region::Node& n) {
  using K = Region::Kind;
  switch (n.kind) {
    case K::Full:
    case K::Empty: return true;
    case K::Disk: return n.p[0] == 0 && n.p[1] == 0;
    case K::Sector: return n.p[0] == 0 && n.p[1] == 0 && n.p[5] - n.p[4] >= 2 * kPi;
    case K::Complement:
    case K::Union:
    case K::Intersection:
      for (const auto& c : n.children)
        if (!node_radial(*c)) return false;
      return true;
    default: return false;
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string node_string(const Region::Node& n) {
  using K = Region::Kind;
  const auto args = [&](std::size_t count) {
    std::string s;
    for (std::size_t i = 0; i < count; ++i) s += (i ? "," : "") + fmt(n.p[i]);
    return s;
  };
  const auto kids = [&]() {
    std::string s;
    for (std::size_t i = 0; i < n.children.size(); ++i) s += (i ? "," : "") + node_string(*n.children[i]);
    return s;
  };
  switch (n.kind) {
    case K::Full: return "full";
    case K::Empty: return "empty";
    case K::Disk: return "disk(" + args(3) + ")";
    case K::Rect: return "rect(" + args(4) + ")";
    case K::HalfPlane: return "halfplane(" + args(2) + ")";
    case K::Polka:
      return "polka(pitch=" + fmt(n.p[0]) + ",dot=" + fmt(n.p[1]) + ",ox=" + fmt(n.p[2]) + ",oy=" + fmt(n.p[3]) +
             ")";
    case K::Sector: return "sector(" + args(6) + ")";
    case K::Complement: return "complement(" + kids() + ")";
    case K::Union: return "union(" + kids() + ")";
    case K::Intersection: return "intersection(" + kids() + ")";
  }
  return "?";
}

NodePtr make_node(Region::Kind kind, std::vector<double> p, std::vector<NodePtr> children = {}) {
  return std::make_shared<const Region::Node>(Region::Node{kind, std::move(p), std::move(children)});
}

void require_finite(std::initializer_list<double> values, const char* what) {
  for (double v : values) require(std::isfinite(v), ErrorKind::InvalidArgument, std::string(what) + ": non-finite parameter");
}

}  // namespace

Region Region::full() { return Region(make_node(Kind::Full, {})); }
Region Region::empty() { return Region(make_node(Kind::Empty, {})); }

Region Region::disk(cplx center, double radius) {
  require_finite({center.real(), center.imag(), radius}, "disk");
  require(radius >= 0, ErrorKind::InvalidArgument, "disk: radius must be nonnegative");
  return Region(make_node(Kind::Disk, {center.real(), center.imag(), radius}));
}

Region Region::rect(const Rect& box) {
  require_finite({box.x0, box.y0, box.x1, box.y1}, "rect");
  require(box.valid(), ErrorKind::InvalidArgument, "rect: x0 <= x1 and y0 <= y1 required");
  return Region(make_node(Kind::Rect, {box.x0, box.y0, box.x1, box.y1}));
}

Region Region::halfplane(double c, double theta) {
  require_finite({c, theta}, "halfplane");
  return Region(make_node(Kind::HalfPlane, {c, theta}));
}

Region Region::polka(double pitch, double dot, double ox, double oy) {
  require_finite({pitch, dot, ox, oy}, "polka");
  require(pitch > 0 && dot >= 0, ErrorKind::InvalidArgument, "polka: pitch > 0 and dot >= 0 required");
  return Region(make_node(Kind::Polka, {pitch, dot, ox, oy}));
}

Region Region::sector(cplx center, double r0, double r1, double th0, double th1) {
  require_finite({center.real(), center.imag(), r0, r1, th0, th1}, "sector");
  require(0 <= r0 && r0 <= r1 && th0 <= th1, ErrorKind::InvalidArgument,
          "sector: 0 <= r0 <= r1 and th0 <= th1 required");
  return Region(make_node(Kind::Sector, {center.real(), center.imag(), r0, r1, th0, th1}));
}

Region Region::complement(const Region& a) { return Region(make_node(Kind::Complement, {}, {a.node_})); }

Region Region::unite(std::vector<Region> parts) {
  require(!parts.empty(), ErrorKind::InvalidArgument, "union: needs at least one operand");
  std::vector<NodePtr> kids;
  for (auto& r : parts) kids.push_back(r.node_);
  return Region(make_node(Kind::Union, {}, std::move(kids)));
}

Region Region::intersect(std::vector<Region> parts) {
  require(!parts.empty(), ErrorKind::InvalidArgument, "intersection: needs at least one operand");
  std::vector<NodePtr> kids;
  for (auto& r : parts) kids.push_back(r.node_);
  return Region(make_node(Kind::Intersection, {}, std::move(kids)));
}

Region::Kind Region::kind() const { return node_->kind; }
bool Region::contains(cplx z) const { return node_contains(*node_, z); }

void Region::indicator(const double* x, const double* y, std::size_t n, std::uint8_t* out) const {
  node_indicator(*node_, x, y, n, out);
}

std::optional<double> Region::closed_form_area() const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Empty: return 0.0;
    case Kind::Disk: return kPi * n.p[2] * n.p[2];
    case Kind::Rect: return (n.p[2] - n.p[0]) * (n.p[3] - n.p[1]);
    case Kind::Sector:
      return 0.5 * std::min(n.p[5] - n.p[4], 2 * kPi) * (n.p[3] * n.p[3] - n.p[2] * n.p[2]);
    default: return std::nullopt;
  }
}

std::optional<Rect> Region::bounding_box() const { return node_box(*node_); }

std::vector<double> Region::radial_breakpoints() const {
  std::vector<double> out;
  node_breakpoints(*node_, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool Region::is_radial() const { return node_radial(*node_); }

std::string Region::to_string() const { return node_string(*node_); }

AreaEstimate monte_carlo_area(const Region& e, const Rect& box, std::size_t samples, std::uint64_t seed) {
  require(samples >= 2, ErrorKind::InsufficientSamples, "monte_carlo_area: need at least two samples");
  AreaEstimate est;
  est.samples = samples;
  if (box.area() <= 0) return est;
  Rng rng = make_rng(seed, Stream::AreaMonteCarlo);
  constexpr std::size_t kBlock = 4096;
  std::vector<double> x(kBlock), y(kBlock);
  std::vector<std::uint8_t> in(kBlock);
  std::size_t hits = 0;
  for (std::size_t done = 0; done < samples;) {
    const std::size_t m = std::min(kBlock, samples - done);
    for (std::size_t i = 0; i < m; ++i) {
      x[i] = box.x0 + box.width() * uniform01(rng);
      y[i] = box.y0 + box.height() * uniform01(rng);
    }
    e.indicator(x.data(), y.data(), m, in.data());
    for (std::size_t i = 0; i < m; ++i) hits += in[i];
    done += m;
  }
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  est.area = box.area() * p;
  est.std_error = box.area() * std::sqrt(p * (1 - p) / static_cast<double>(samples));
  return est;
}

}  // namespace dfock
