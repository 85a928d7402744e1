#include <doctest.h>

#include <cmath>

#include "hullcap/errors.hpp"
#include "hullcap/p_laplace.hpp"

using namespace hullcap;

namespace {
RegionMask ball(const GridPtr& g, double r) {
  RegionMask m(g);
  for (std::size_t i = 0; i < g->size(); ++i) {
    const Point3 c = g->center(i);
    m.set(i, c[0] * c[0] + c[1] * c[1] < r * r);
  }
  return m;
}
}  // namespace

TEST_CASE("2-capacity of a disk in an annulus matches 2 pi / log(R / r0)") {
  const double h = 1.0 / 64;
  auto g = make_grid({72, 72}, h, {0.0, 0.0});
  PLaplaceConfig cfg;
  cfg.p = 2.0;
  cfg.radii_schedule = {1.0};
  cfg.mirror = true;
  const PotentialResult r = solve_potential(g, ball(g, 0.25), cfg);
  CHECK(r.report.converged);
  const double exact = 2 * M_PI / std::log(4.0);
  CHECK(std::abs(r.capacity / exact - 1.0) < 0.03);
  for (double u : r.potential.values) {
    CHECK(u >= -1e-12);
    CHECK(u <= 1.0 + 1e-12);
  }
}

TEST_CASE("capacity decreases as the truncation ball grows") {
  const double h = 1.0 / 32;
  auto g = make_grid({72, 72}, h, {0.0, 0.0});
  PLaplaceConfig cfg;
  cfg.p = 1.5;
  cfg.radii_schedule = {1.0, 2.0};
  cfg.mirror = true;
  const PotentialResult r = solve_potential(g, ball(g, 0.25), cfg);
  const auto caps = r.per_radius.column("capacity");
  REQUIRE(caps.size() == 2);
  CHECK(caps[1] < caps[0]);
}

TEST_CASE("preconditions") {
  auto g = make_grid({32, 32}, 1.0 / 32, {0.0, 0.0});
  PLaplaceConfig cfg;
  cfg.mirror = true;
  cfg.radii_schedule = {0.5};
  CHECK_THROWS_AS(solve_potential(g, RegionMask(g), cfg), InvalidArgument);
  cfg.radii_schedule = {0.2};
  CHECK_THROWS_AS(solve_potential(g, ball(g, 0.25), cfg), InvalidArgument);
  cfg.radii_schedule = {0.5};
  cfg.p = 1.0;
  CHECK_THROWS_AS(solve_potential(g, ball(g, 0.25), cfg), InvalidArgument);
}

TEST_CASE("arrival time from a potential") {
  auto g = make_box_grid(2, 16, -1.0, 2.0);
  ScalarField u(g, 0.0);
  u[g->index(8, 8)] = 1.0;
  const ImcfEstimate e = imcf_from_potential(u, 1.5);
  CHECK_FALSE(e.flagged);
  CHECK(e.w[g->index(8, 8)] == doctest::Approx(0.0));
  const ImcfEstimate z = imcf_from_potential(ScalarField(g, 0.1), 1.5);
  CHECK(z.flagged);
  CHECK(z.hull.empty());
}

TEST_CASE("flat arrival time log(r / r0) solves the level-set equation") {
  auto g = make_box_grid(2, 128, -1.0, 2.0);
  ScalarField w(g);
  RegionMask region(g);
  for (std::size_t i = 0; i < g->size(); ++i) {
    const Point3 c = g->center(i);
    const double r = std::hypot(c[0], c[1]);
    w[i] = std::log(r / 0.25);
    region.set(i, r > 0.4 && r < 0.9);
  }
  const LevelSetResidual lr = level_set_residual(w, 1e-8, &region);
  CHECK(lr.mean_abs < 5e-3);

  RegionMask window(g);
  for (std::size_t i = 0; i < g->size(); ++i) {
    const double r = std::hypot(g->center(i)[0], g->center(i)[1]);
    window.set(i, r > 0.35 && r < 0.9);
  }
  ScalarField v = w;
  v[g->index(0, 0)] += 1.0;
  CHECK_THROWS_AS(imcf_functional(w, v, window), InvalidArgument);
  const JValues j = imcf_functional(w, w, window);
  CHECK(j.Jw == doctest::Approx(j.Jv));
}
