#include <doctest.h>

#include <cmath>

#include "hullcap/errors.hpp"
#include "hullcap/warped_radial.hpp"

using namespace hullcap;

TEST_CASE("flat capacities match the closed form") {
  for (int n : {2, 3}) {
    const WarpedProfile flat = preset_profile("flat", n);
    for (double p : {1.2, 1.5}) {
      const RadialCapacity c = radial_p_capacity(flat, 1.0, p);
      CHECK(c.capacity == doctest::Approx(unit_sphere_area(n) * std::pow((n - p) / (p - 1), p - 1)).epsilon(1e-8));
    }
  }
  CHECK(radial_p_capacity(preset_profile("flat", 2), 1.0, 2.0).parabolic);
  CHECK(radial_relative_capacity(preset_profile("flat", 2), 0.25, 1.0, 2.0) ==
        doctest::Approx(2 * M_PI / std::log(4.0)).epsilon(1e-9));
}

TEST_CASE("pathology trichotomy") {
  CHECK(radial_hull(preset_profile("cusp", 2), 1.0).kind == RadialVerdict::Kind::kNoSolution);
  CHECK(radial_hull(preset_profile("cylinder", 2), 1.0).kind == RadialVerdict::Kind::kNonUniqueUnboundedVolume);
  const RadialVerdict cigar = radial_hull(preset_profile("cigar", 2), 1.0);
  CHECK(cigar.kind == RadialVerdict::Kind::kHullExistsUnique);
  CHECK(cigar.witness_radius == doctest::Approx(1.0));
  CHECK(to_string(RadialVerdict::Kind::kNoSolution) == "no_solution");
}

TEST_CASE("asymptotic volume ratio") {
  CHECK(avr(preset_profile("flat", 3)).value == doctest::Approx(1.0));
  CHECK(avr(preset_profile("cone", 3, 0.5)).value == doctest::Approx(0.25));
  CHECK(avr(preset_profile("cigar", 2)).value == doctest::Approx(0.0));
}

TEST_CASE("cigar arrival time is bounded") {
  const RadialImcf im = radial_imcf(preset_profile("cigar", 2), 1.0);
  CHECK(im.proper_but_bounded);
  CHECK(im.w(3.0) == doctest::Approx(std::log(std::tanh(3.0) / std::tanh(1.0))));
  CHECK(im.sup == doctest::Approx(-std::log(std::tanh(1.0))));
  const RadialImcf flat = radial_imcf(preset_profile("flat", 2), 1.0);
  CHECK_FALSE(flat.proper_but_bounded);
}

TEST_CASE("sampled profile reproduces the flat plane") {
  std::vector<double> rho, f;
  for (int i = 0; i <= 40; ++i) {
    rho.push_back(0.25 * i);
    f.push_back(std::max(0.25 * i, 1e-9));
  }
  f[0] = 1e-9;
  const WarpedProfile s = sampled_profile("samples", 2, rho, f, Tail{Tail::Kind::kPolynomial, 1.0});
  CHECK(sphere_area(s, 2.0) == doctest::Approx(4 * M_PI).epsilon(1e-6));
  CHECK_THROWS_AS(preset_profile("torus", 2), InvalidArgument);
}

TEST_CASE("cone Willmore energy equals AVR times the sphere area") {
  const WarpedProfile cone = preset_profile("cone", 3, 0.5);
  CHECK(willmore_radial(cone, 2.0) == doctest::Approx(0.25 * 4 * M_PI));
  CHECK(mean_curvature_radial(cone, 2.0) == doctest::Approx(1.0));
}
