#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "hullcap/errors.hpp"
#include "hullcap/field_core.hpp"
#include "hullcap/hull_solver.hpp"
#include "hullcap/shapes.hpp"
#include "hullcap/tv_engine.hpp"

using namespace hullcap;

namespace {
ShapeSpec at_centre(const std::string& name) {
  ShapeSpec s;
  s.name = name;
  s.center = {0.5, 0.5, 0.0};
  return s;
}
}  // namespace

TEST_CASE("TV denoising of a constant returns the constant") {
  auto g = make_box_grid(2, 16, 0.0, 1.0);
  TvProblem pb;
  pb.grid = g;
  pb.fidelity.assign(g->size(), 1.0);
  pb.data.assign(g->size(), 0.3);
  pb.lower.assign(g->size(), -std::numeric_limits<double>::infinity());
  pb.upper.assign(g->size(), std::numeric_limits<double>::infinity());
  pb.boundary = TvBoundary::kNeumann;
  const TvSolution s = solve_tv(pb, TvParams{.gap_tol = 1e-8});
  for (double u : s.u) CHECK(u == doctest::Approx(0.3).epsilon(1e-4));
}

TEST_CASE("hull of a disk is the disk") {
  auto g = make_box_grid(2, 128, 0.0, 1.0);
  const RegionMask disk = rasterize(at_centre("disk"), g);
  const HullResult h = compute_hull(ObstacleProblem{g, disk, 8, {.gap_tol = 1e-3}});
  CHECK(h.report.converged);
  CHECK(equal_up_to(h.hull, disk, 1));
  CHECK(is_subset(disk, h.hull));
}

TEST_CASE("hull of a star fills the concavities") {
  auto g = make_box_grid(2, 128, 0.0, 1.0);
  const ShapeSpec s = at_centre("star");
  const RegionMask star = rasterize(s, g);
  const HullResult h = compute_hull(ObstacleProblem{g, star, 8, {.gap_tol = 1e-3}});
  CHECK(h.hull.count() > star.count() * 1.2);
  CHECK(h.hull_perimeter < mollified_perimeter(star));
  const OutwardVerdict v = is_outward_minimising(star, 1e-3);
  CHECK_FALSE(v.verdict);
  CHECK(v.gap > 1e-3);
}

TEST_CASE("dumbbell with a narrow bar is bridged") {
  auto g = make_box_grid(2, 128, 0.0, 1.0);
  ShapeSpec s = at_centre("dumbbell");
  s.gap = 0.08;
  const RegionMask d = rasterize(s, g);
  const HullResult h = compute_hull(ObstacleProblem{g, d, 8, {.gap_tol = 1e-3}});
  CHECK(h.hull.count() > d.count());
  CHECK(h.hull_perimeter < mollified_perimeter(d));
}

TEST_CASE("obstacle in the padding band is rejected") {
  auto g = make_box_grid(2, 64, 0.0, 1.0);
  ShapeSpec s = at_centre("disk");
  s.radius = 0.45;
  CHECK_THROWS_AS(compute_hull(ObstacleProblem{g, rasterize(s, g), 8, {}}), DomainTooSmall);
  CHECK_THROWS_AS(compute_hull(ObstacleProblem{g, RegionMask(g), 8, {}}), InvalidArgument);
}

TEST_CASE("extract_hull keeps the obstacle") {
  auto g = make_box_grid(2, 32, 0.0, 1.0);
  const RegionMask disk = rasterize(at_centre("disk"), g);
  const HullResult h = extract_hull(ScalarField(g, 0.0), disk);
  CHECK(h.hull == disk);
  CHECK_THROWS_AS(extract_hull(ScalarField(g, 2.0), disk), InvalidArgument);
}
