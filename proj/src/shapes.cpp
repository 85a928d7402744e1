#include "hullcap/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hullcap/errors.hpp"

namespace hullcap {

const std::vector<std::string>& shape_names() {
  static const std::vector<std::string> names{"disk", "square", "star", "dumbbell", "cross", "blob"};
  return names;
}

std::vector<Vec2> polygon_vertices(const ShapeSpec& s) {
  const double cx = s.center[0];
  const double cy = s.center[1];
  std::vector<Vec2> v;
  auto rotated = [&](double x, double y) {
    const double c = std::cos(s.rotation);
    const double sn = std::sin(s.rotation);
    return Vec2{cx + c * x - sn * y, cy + sn * x + c * y};
  };
  if (s.name == "square") {
    const double r = s.radius;
    v = {rotated(-r, -r), rotated(r, -r), rotated(r, r), rotated(-r, r)};
  } else if (s.name == "star") {
    require(s.points >= 3, "star needs at least 3 points");
    require(s.amplitude > 0.0 && s.amplitude < 1.0, "star amplitude must lie in (0, 1)");
    const int m = 2 * s.points;
    for (int i = 0; i < m; ++i) {
      const double t = std::numbers::pi * i / s.points;
      const double r = (i % 2 == 0) ? s.radius : s.radius * (1.0 - s.amplitude);
      v.push_back(rotated(r * std::cos(t), r * std::sin(t)));
    }
  } else if (s.name == "dumbbell") {
    const double a = 0.5 * s.gap;
    const double b = a + s.side;
    const double hs = 0.5 * s.side;
    const double hb = 0.5 * s.bar_width;
    require(hb < hs, "dumbbell bar must be thinner than the squares");
    v = {rotated(-b, -hs), rotated(-a, -hs), rotated(-a, -hb), rotated(a, -hb), rotated(a, -hs), rotated(b, -hs),
         rotated(b, hs),   rotated(a, hs),   rotated(a, hb),   rotated(-a, hb), rotated(-a, hs), rotated(-b, hs)};
  } else if (s.name == "cross") {
    const double l = s.arm_length;
    const double w = 0.5 * s.arm_width;
    require(w < l, "cross arms must be longer than they are wide");
    v = {rotated(w, -l), rotated(w, -w),  rotated(l, -w),   rotated(l, w),   rotated(w, w),   rotated(w, l),
         rotated(-w, l), rotated(-w, w), rotated(-l, w), rotated(-l, -w), rotated(-w, -w), rotated(-w, -l)};
  } else {
    throw InvalidArgument("shape '" + s.name + "' is not polygonal");
  }
  return v;
}

double polygon_perimeter(const std::vector<Vec2>& v) {
  double p = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % v.size()];
    p += std::hypot(b[0] - a[0], b[1] - a[1]);
  }
  return p;
}

bool point_in_polygon(const std::vector<Vec2>& v, double x, double y) {
  bool inside = false;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    const auto& a = v[i];
    const auto& b = v[j];
    if ((a[1] > y) != (b[1] > y)) {
      const double xc = a[0] + (y - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
      if (x < xc) inside = !inside;
    }
  }
  return inside;
}

double shape_extent(const ShapeSpec& s) {
  if (s.name == "disk") return s.radius;
  if (s.name == "square") return s.radius * std::sqrt(2.0);
  if (s.name == "blob") {
    double sum = 1.0;
    for (double c : s.fourier) sum += std::abs(c);
    return s.radius * sum;
  }
  double r = 0.0;
  for (const auto& p : polygon_vertices(s)) r = std::max(r, std::hypot(p[0] - s.center[0], p[1] - s.center[1]));
  return r;
}

RegionMask rasterize(const ShapeSpec& s, const GridPtr& grid) {
  const Grid& g = *grid;
  const int n = g.dim();
  RegionMask mask(grid);
  if (s.name == "disk") {
    require(s.radius > 0.0, "disk radius must be positive");
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
      const Point3 p = g.center(idx);
      double r2 = 0.0;
      for (int a = 0; a < n; ++a) r2 += (p[a] - s.center[a]) * (p[a] - s.center[a]);
      mask.cells[idx] = r2 <= s.radius * s.radius ? 1 : 0;
    }
    return mask;
  }
  if (s.name == "square" && (n == 3 || s.rotation == 0.0)) {
    require(s.rotation == 0.0, "rotated cubes are not supported");
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
      const Point3 p = g.center(idx);
      bool in = true;
      for (int a = 0; a < n; ++a) in = in && std::abs(p[a] - s.center[a]) <= s.radius;
      mask.cells[idx] = in ? 1 : 0;
    }
    return mask;
  }
  require(n == 2, "preset '" + s.name + "' is only defined in 2D");
  if (s.name == "blob") {
    require(s.radius > 0.0, "blob radius must be positive");
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
      const Point3 p = g.center(idx);
      const double x = p[0] - s.center[0];
      const double y = p[1] - s.center[1];
      const double t = std::atan2(y, x) - s.rotation;
      double r = 1.0;
      for (std::size_t k = 0; k < s.fourier.size(); ++k) r += s.fourier[k] * std::cos(static_cast<double>(k + 1) * t);
      mask.cells[idx] = std::hypot(x, y) <= s.radius * r ? 1 : 0;
    }
    return mask;
  }
  const auto poly = polygon_vertices(s);
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    const Point3 p = g.center(idx);
    mask.cells[idx] = point_in_polygon(poly, p[0], p[1]) ? 1 : 0;
  }
  return mask;
}

}  // namespace hullcap
