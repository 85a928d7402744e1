#include <doctest.h>

#include <cmath>

#include "hullcap/cap_limit.hpp"
#include "hullcap/errors.hpp"

using namespace hullcap;

TEST_CASE("Sobolev data") {
  const double C = sharp_sobolev_constant(2);
  CHECK(C == doctest::Approx(1.0 / (2.0 * std::sqrt(M_PI))));
  const SobolevData d = sobolev_data(3, 1.5, sharp_sobolev_constant(3));
  CHECK(d.p_star == doctest::Approx(3.0));
  CHECK(d.q_p == doctest::Approx(2.0));
  CHECK_THROWS_AS(sobolev_data(2, 2.5, C), InvalidArgument);
}

TEST_CASE("Xu factor tends to 1 as p decreases to 1") {
  const double p = 1.0 + std::ldexp(1.0, -10);
  for (int n : {2, 3}) CHECK(std::abs(xu_factor(n, p, sharp_sobolev_constant(n)) - 1.0) < 1e-3);
}

TEST_CASE("Holopainen integral diverges on the plane at p = 2") {
  auto area = [](double t) { return M_PI * t * t; };
  const HolopainenResult flat2 = holopainen_integral(area, 2.0, 1.0, 1e6);
  CHECK(flat2.diverges);
  auto vol3 = [](double t) { return 4.0 / 3.0 * M_PI * t * t * t; };
  const HolopainenResult flat3 = holopainen_integral(vol3, 2.0, 1.0, 1e6);
  CHECK_FALSE(flat3.diverges);
}

TEST_CASE("decay envelope") {
  const DecayBound b = decay_bound(1.5, 3.0, 1.0, 2.0);
  CHECK(b.exponent == doctest::Approx(3.0));
  CHECK(b.warning.empty());
  CHECK_FALSE(decay_bound(2.98, 3.0, 1.0, 2.0).warning.empty());
  std::vector<double> r{1, 2, 4, 8}, u;
  for (double x : r) u.push_back(0.5 * std::pow(x, -3.0));
  const DecayFit f = fit_decay(r, u, 1.5, 3.0);
  CHECK(f.fitted_slope == doctest::Approx(-3.0));
  CHECK(f.shape_ok);
}

TEST_CASE("radial limit study on the flat plane") {
  const LimitStudy st = run_radial_limit_study(preset_profile("flat", 2), 1.0, {1.5, 1.25, 1.1, 1.05});
  CHECK(st.chain_ok);
  CHECK(st.hull_perimeter == doctest::Approx(2 * M_PI));
  const auto caps = st.capacities.column("capacity");
  for (std::size_t i = 2; i < caps.size(); ++i)
    CHECK(std::abs(caps[i] - 2 * M_PI) < std::abs(caps[i - 1] - 2 * M_PI));
  CHECK(std::abs(extrapolate_limit(st.capacities) - 2 * M_PI) < std::abs(caps.back() - 2 * M_PI));
}

TEST_CASE("radial limit study flags the cigar") {
  const LimitStudy st = run_radial_limit_study(preset_profile("cigar", 2), 1.0, {1.5, 1.2});
  CHECK_FALSE(st.chain_ok);
  CHECK_FALSE(st.flags.empty());
}
