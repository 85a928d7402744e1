#include <doctest.h>

#include <cmath>

#include "hullcap/errors.hpp"
#include "hullcap/isoperimetry.hpp"

using namespace hullcap;

namespace {
// Unit square container with a 4-cell frame of empty cells.
RegionMask square_container(int m) {
  const int pad = 4;
  const double h = 1.0 / m;
  auto g = make_grid({m + 2 * pad, m + 2 * pad}, h, {-pad * h, -pad * h});
  RegionMask U(g);
  for (std::size_t i = 0; i < g->size(); ++i) {
    const Index3 c = g->coords(i);
    U.set(i, c[0] >= pad && c[0] < pad + m && c[1] >= pad && c[1] < pad + m);
  }
  return U;
}
}  // namespace

TEST_CASE("conical profile in the flat plane is 2 sqrt(pi v)") {
  CHECK(conical_profile(0.3, 2 * M_PI, 2) == doctest::Approx(2 * std::sqrt(M_PI * 0.3)));
}

TEST_CASE("iso ratio of a disk approaches 4 pi") {
  auto g = make_box_grid(2, 128, 0.0, 1.0);
  RegionMask d(g);
  for (std::size_t i = 0; i < g->size(); ++i) {
    const Point3 c = g->center(i);
    d.set(i, std::hypot(c[0] - 0.5, c[1] - 0.5) < 0.3);
  }
  CHECK(std::abs(iso_ratio(d) / (4 * M_PI) - 1.0) < 0.03);
}

TEST_CASE("small constrained minimiser in a square is a round disk") {
  const RegionMask U = square_container(64);
  const IsoSet s = constrained_isoperimetric(U, 0.1);
  CHECK(s.volume == doctest::Approx(0.1).epsilon(0.01));
  CHECK(std::abs(s.area / (2 * std::sqrt(M_PI * 0.1)) - 1.0) < 0.03);
  CHECK(s.multiplier > 0.0);
  const CurvatureReport cr = mean_curvature_bounds_check(s.set, U, s.multiplier);
  CHECK_FALSE(cr.empty_free_boundary);
  CHECK(cr.samples > 0);
  CHECK(cr.mean == doctest::Approx(1.0 / std::sqrt(0.1 / M_PI)).epsilon(0.15));
}

TEST_CASE("volumes outside (0, |U|) are rejected") {
  const RegionMask U = square_container(32);
  CHECK_THROWS_AS(constrained_isoperimetric(U, 0.0), InvalidArgument);
  CHECK_THROWS_AS(constrained_isoperimetric(U, 1.5), InvalidArgument);
}

TEST_CASE("Dini comparison of exact disk areas has zero increments") {
  std::vector<double> v, a;
  for (int k = 1; k <= 8; ++k) {
    v.push_back(0.05 * k);
    a.push_back(2 * std::sqrt(M_PI * 0.05 * k));
  }
  const DiniResult d = dini_comparison(v, a, 2 * M_PI, 2);
  CHECK(d.monotone_ok);
  for (double x : d.increments) CHECK(std::abs(x) < 1e-9);
  a[5] *= 0.9;
  CHECK_FALSE(dini_comparison(v, a, 2 * M_PI, 2).monotone_ok);
  CHECK_THROWS_AS(dini_comparison({0.1, 0.2}, {1.0, 1.1}, 2 * M_PI, 2), InvalidArgument);
}

TEST_CASE("a full container has no free boundary") {
  const RegionMask U = square_container(48);
  const CurvatureReport cr = mean_curvature_bounds_check(U, U);
  CHECK(cr.empty_free_boundary);
}
