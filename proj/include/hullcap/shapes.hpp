#pragma once

#include <array>
#include <string>
#include <vector>

#include "hullcap/grid.hpp"

namespace hullcap {

using Vec2 = std::array<double, 2>;

/// Named obstacle presets. Lengths are in grid coordinates.
///
/// - disk: ball of `radius` (2D or 3D)
/// - square: axis-aligned square/cube of half side `radius`
/// - star: 2*points-gon alternating outer `radius` and inner radius*(1-amplitude)
/// - dumbbell: two squares of side `side`, separated by `gap`, joined by a bar of width `bar_width`
/// - cross: plus sign with arms reaching `arm_length` from the centre, arm width `arm_width`
/// - blob: polar graph r(t) = radius * (1 + sum_k fourier[k-1] cos(k t))
struct ShapeSpec {
  std::string name = "disk";
  Point3 center{0.0, 0.0, 0.0};
  double radius = 0.25;
  int points = 5;
  double amplitude = 0.35;
  double rotation = 0.0;
  double gap = 0.2;
  double bar_width = 0.04;
  double side = 0.2;
  double arm_length = 0.3;
  double arm_width = 0.1;
  std::vector<double> fourier;

  friend bool operator==(const ShapeSpec&, const ShapeSpec&) = default;
};

/// Known preset names, in documentation order.
const std::vector<std::string>& shape_names();

/// Cell-centre rasterisation of a preset.
RegionMask rasterize(const ShapeSpec& shape, const GridPtr& grid);

/// Vertices (counter-clockwise) of a polygonal preset: square (2D), star, dumbbell, cross.
std::vector<Vec2> polygon_vertices(const ShapeSpec& shape);

/// Exact perimeter of a closed polygon.
double polygon_perimeter(const std::vector<Vec2>& vertices);

/// Even-odd point-in-polygon test.
bool point_in_polygon(const std::vector<Vec2>& vertices, double x, double y);

/// Axis-aligned bounding radius of the preset about its centre.
double shape_extent(const ShapeSpec& shape);

}  // namespace hullcap
