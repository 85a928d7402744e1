#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "hullcap/errors.hpp"
#include "hullcap/field_core.hpp"
#include "hullcap/field_io.hpp"
#include "hullcap/shapes.hpp"

using namespace hullcap;

TEST_CASE("grid indexing and geometry") {
  auto g = make_box_grid(2, 8, -1.0, 2.0);
  CHECK(g->size() == 64);
  CHECK(g->spacing() == doctest::Approx(0.25));
  const auto idx = g->index(3, 5);
  CHECK(g->coords(idx) == Index3{3, 5, 0});
  CHECK(g->center(idx)[0] == doctest::Approx(-1.0 + 3.5 * 0.25));
  CHECK(g->cell_volume(idx) == doctest::Approx(0.0625));
  auto g3 = make_box_grid(3, 4, 0.0, 1.0);
  CHECK(g3->size() == 64);
  CHECK(g3->face_area(0) == doctest::Approx(1.0 / 16));
}

TEST_CASE("conformal factor scales volume and area") {
  auto g = make_box_grid(2, 4, 0.0, 1.0);
  auto c = g->with_conformal_factor(std::vector<double>(16, 2.0));
  CHECK(c->cell_volume(0) == doctest::Approx(4.0 * g->cell_volume(0)));
  CHECK(c->face_area(0) == doctest::Approx(2.0 * g->face_area(0)));
  CHECK_THROWS_AS(g->with_conformal_factor(std::vector<double>(16, -1.0)), InvalidArgument);
}

TEST_CASE("axis-aligned square has exact volume and perimeter up to one corner") {
  auto g = make_box_grid(2, 64, 0.0, 1.0);
  ShapeSpec s;
  s.name = "square";
  s.center = {0.5, 0.5, 0.0};
  s.radius = 0.25;
  const Measure m = measure(rasterize(s, g));
  CHECK(m.volume == doctest::Approx(0.25));
  // the far corner cell sees both differences at once
  CHECK(m.perimeter == doctest::Approx(2.0 - (2.0 - std::sqrt(2.0)) / 64));
}

TEST_CASE("mollified perimeter of a disk is within 2 percent") {
  auto g = make_box_grid(2, 256, 0.0, 1.0);
  ShapeSpec s;
  s.center = {0.5, 0.5, 0.0};
  s.radius = 0.25;
  const double P = mollified_perimeter(rasterize(s, g));
  CHECK(std::abs(P / (2 * M_PI * 0.25) - 1.0) < 0.02);
}

TEST_CASE("relaxed perimeter rejects values outside [0, 1]") {
  auto g = make_box_grid(2, 8, 0.0, 1.0);
  ScalarField f(g, 0.5);
  CHECK(relaxed_perimeter(f) > 0.0);
  f[3] = 1.5;
  CHECK_THROWS_AS(relaxed_perimeter(f), InvalidArgument);
}

TEST_CASE("density interior keeps solid squares and drops isolated cells") {
  auto g = make_box_grid(2, 16, 0.0, 1.0);
  ShapeSpec s;
  s.name = "square";
  s.center = {0.5, 0.5, 0.0};
  s.radius = 0.25;
  const RegionMask sq = rasterize(s, g);
  CHECK(measure_theoretic_interior(sq) == sq);
  RegionMask dot(g);
  dot.set(g->index(2, 2), true);
  CHECK(measure_theoretic_interior(dot).empty());
}

TEST_CASE("mask algebra and layer comparisons") {
  auto g = make_box_grid(2, 16, 0.0, 1.0);
  ShapeSpec s;
  s.center = {0.5, 0.5, 0.0};
  s.radius = 0.2;
  const RegionMask a = rasterize(s, g);
  const RegionMask b = dilate(a, 1);
  CHECK(is_subset(a, b));
  CHECK_FALSE(is_subset(b, a));
  CHECK(equal_up_to(a, b, 1));
  CHECK_FALSE(equal_up_to(a, dilate(a, 2), 1));
  CHECK(erode(b, 1) == a);
  CHECK(symmetric_difference_count(a, b) == b.count() - a.count());
  CHECK(mask_union(a, mask_complement(a)).count() == g->size());
  CHECK(boundary_clearance(a) > 0);
}

TEST_CASE("binary field dumps round-trip") {
  auto g = make_box_grid(2, 8, -0.5, 1.0)->with_conformal_factor(std::vector<double>(64, 1.5));
  ScalarField f(g);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::sin(double(i));
  const ScalarField back = decode_field(encode_field(f));
  CHECK(*back.grid == *g);
  CHECK(back.values == f.values);
  RegionMask m(g);
  m.set(5, true);
  CHECK(decode_mask(encode_mask(m)) == m);
  CHECK_THROWS_AS(decode_field("garbage"), InvalidArgument);

  const auto path = (std::filesystem::temp_directory_path() / "hullcap_unit_field.bin").string();
  write_field(path, f);
  CHECK(read_field(path).values == f.values);
  std::filesystem::remove(path);
}

TEST_CASE("shape presets") {
  auto g = make_box_grid(2, 128, -0.5, 1.0);
  for (const auto& name : shape_names()) {
    ShapeSpec s;
    s.name = name;
    CAPTURE(name);
    CHECK_FALSE(rasterize(s, g).empty());
  }
  ShapeSpec sq;
  sq.name = "square";
  sq.radius = 0.5;
  CHECK(polygon_perimeter(polygon_vertices(sq)) == doctest::Approx(4.0));
  CHECK(point_in_polygon(polygon_vertices(sq), 0.1, 0.1));
  ShapeSpec bad;
  bad.name = "hexagon";
  CHECK_THROWS_AS(rasterize(bad, g), InvalidArgument);
}
