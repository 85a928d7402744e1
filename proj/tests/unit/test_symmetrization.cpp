#include <doctest.h>

#include <cmath>

#include "hullcap/errors.hpp"
#include "hullcap/symmetrization.hpp"

using namespace hullcap;

namespace {
GridPtr centred_grid(int half, double h) { return make_grid({2 * half, 2 * half}, h, {-half * h, -half * h}); }
}  // namespace

TEST_CASE("rearrangement of a radial field is the field itself") {
  auto g = centred_grid(258, 1.0 / 256);
  ScalarField f(g);
  RegionMask s(g);
  for (std::size_t i = 0; i < g->size(); ++i) {
    const Point3 c = g->center(i);
    const double r2 = c[0] * c[0] + c[1] * c[1];
    if (r2 < 1.0) {
      s.set(i, true);
      f[i] = 1.0 - r2;
    }
  }
  const Rearrangement R = distribution_function(f, s);
  CHECK(R.F(0.5) == doctest::Approx(0.75).epsilon(0.01));
  CHECK(R.mass(1) == doctest::Approx(M_PI / 2).epsilon(0.01));
  const PolyaSzegoResult ps = polya_szego_check(f, s);
  CHECK(ps.lhs == doctest::Approx(2 * M_PI).epsilon(0.01));
  CHECK(ps.rhs == doctest::Approx(2 * M_PI).epsilon(0.01));
  CHECK(ps.holds);
  CHECK(ps.l2_defect < 1e-4);
  const PolyaSzegoResult quarter = polya_szego_check(f, s, 0.25);
  CHECK(quarter.rhs / ps.rhs == doctest::Approx(0.25));
}

TEST_CASE("seeded random fields are reproducible and satisfy the inequality") {
  auto g = make_grid({96, 96}, 1.0 / 96, {0.0, 0.0});
  CHECK(random_smooth_field(g, 7).values == random_smooth_field(g, 7).values);
  CHECK(random_smooth_field(g, 7).values != random_smooth_field(g, 8).values);
  const CampaignResult c = polya_szego_campaign(g, 5, 11, 512);
  CHECK(c.held == 5);
  CHECK(c.table.size() == 5);
}

TEST_CASE("a field that does not vanish on the boundary is rejected") {
  auto g = make_grid({32, 32}, 1.0 / 32, {0.0, 0.0});
  CHECK_THROWS_AS(polya_szego_check(ScalarField(g, 1.0), RegionMask(g, true)), InvalidArgument);
}

TEST_CASE("Dirichlet eigenvalue of the unit square") {
  auto g = make_grid({64, 64}, 1.0 / 64, {0.0, 0.0});
  const Eigenpair e = first_eigenvalue(RegionMask(g, true));
  CHECK(e.lambda1 == doctest::Approx(2 * M_PI * M_PI).epsilon(0.01));
  CHECK(e.report.converged);
  double l2 = 0.0;
  for (double v : e.eigenfield.values) {
    CHECK(v >= 0.0);
    l2 += v * v / (64.0 * 64.0);
  }
  CHECK(l2 == doctest::Approx(1.0));
}

TEST_CASE("Faber-Krahn bound and its AVR scaling") {
  CHECK(ball_first_eigenvalue(2, M_PI) == doctest::Approx(5.783185962946784));
  CHECK(ball_first_eigenvalue(3, 4.0 / 3.0 * M_PI) == doctest::Approx(M_PI * M_PI));
  auto g = make_grid({48, 48}, 1.0 / 48, {0.0, 0.0});
  const FaberKrahnResult a = faber_krahn_check(RegionMask(g, true), 1.0);
  const FaberKrahnResult b = faber_krahn_check(RegionMask(g, true), 0.25);
  CHECK(a.holds);
  CHECK(b.bound / a.bound == doctest::Approx(0.25).epsilon(1e-12));
  CHECK_THROWS_AS(faber_krahn_check(RegionMask(g, true), 1.5), InvalidArgument);
}
