#include "hullcap/warped_radial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

// pchip.hpp in Boost 1.74 calls isnan unqualified.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/minima.hpp>

#include "hullcap/errors.hpp"
#include "hullcap/study.hpp"

namespace hullcap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double integrate_finite(const std::function<double(double)>& g, double a, double b) {
  if (a == b) return 0.0;
  if (a > b) return -integrate_finite(g, b, a);
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, a, b, 15, 1e-13);
}

// Stiff integrands concentrated at the left endpoint.
double integrate_endpoint(const std::function<double(double)>& g, double a, double b) {
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate(g, a, b, 1e-13);
}

bool tail_decays_to_zero(const Tail& t) {
  switch (t.kind) {
    case Tail::Kind::kPolynomial:
      return t.value < 0.0;
    case Tail::Kind::kExponential:
      return t.value < 0.0;
    case Tail::Kind::kBounded:
      return t.value <= 0.0;
  }
  return false;
}

std::vector<double> sample_radii(double rho0) {
  std::vector<double> r;
  const int count = 4000;
  // Dense near rho0, reaching rho0 + 200.
  for (int i = 0; i <= count; ++i) {
    const double s = static_cast<double>(i) / count;
    r.push_back(rho0 + 200.0 * s * s);
  }
  return r;
}

}  // namespace

double unit_sphere_area(int n) {
  require(n >= 1, "dimension must be positive");
  return 2.0 * std::pow(M_PI, 0.5 * n) / boost::math::tgamma(0.5 * n);
}

double unit_ball_volume(int n) { return unit_sphere_area(n) / n; }

WarpedProfile make_profile(std::string name, int n, std::function<double(double)> f,
                           std::function<double(double)> f_prime, Tail tail) {
  require(n >= 2, "warped profile dimension must be at least 2");
  require(static_cast<bool>(f) && static_cast<bool>(f_prime), "warped profile needs f and f'");
  WarpedProfile p{std::move(name), n, std::move(f), std::move(f_prime), tail};
  for (double r : {0.01, 0.1, 1.0, 10.0, 30.0, 60.0}) {
    const double v = p.f(r);
    require(std::isfinite(v) && v > 0.0, "warped profile " + p.name + ": f must be positive on (0, inf)");
  }
  const double f1 = p.f(30.0);
  const double f2 = p.f(60.0);
  bool ok = true;
  switch (tail.kind) {
    case Tail::Kind::kPolynomial:
      ok = std::abs(std::log(f2 / f1) / std::log(2.0) - tail.value) <= 0.1;
      break;
    case Tail::Kind::kExponential:
      ok = std::abs((std::log(f2) - std::log(f1)) / 30.0 - tail.value) <= 0.05 + 0.05 * std::abs(tail.value);
      break;
    case Tail::Kind::kBounded:
      ok = std::abs(f2 - tail.value) <= 1e-3 * std::max(1.0, std::abs(tail.value));
      break;
  }
  require(ok, "warped profile " + p.name + ": declared tail does not match samples of f");
  return p;
}

const std::vector<std::string>& profile_names() {
  static const std::vector<std::string> names{"flat",  "cone",      "cusp",       "cylinder",
                                              "cigar", "paraboloid", "smooth_cone"};
  return names;
}

WarpedProfile preset_profile(const std::string& name, int n, double a) {
  using K = Tail::Kind;
  if (name == "flat") {
    return make_profile(name, n, [](double r) { return r; }, [](double) { return 1.0; }, {K::kPolynomial, 1.0});
  }
  if (name == "cone" || name == "smooth_cone") {
    require(a > 0.0 && a <= 1.0, "cone slope must lie in (0, 1]");
    if (name == "cone") {
      return make_profile(name, n, [a](double r) { return a * r; }, [a](double) { return a; }, {K::kPolynomial, 1.0});
    }
    return make_profile(
        name, n, [a](double r) { return a * r + (1.0 - a) * std::tanh(r); },
        [a](double r) {
          const double c = std::cosh(r);
          return a + (1.0 - a) / (c * c);
        },
        {K::kPolynomial, 1.0});
  }
  if (name == "cusp") {
    return make_profile(name, n, [](double r) { return std::exp(-r); }, [](double r) { return -std::exp(-r); },
                        {K::kExponential, -1.0});
  }
  if (name == "cylinder") {
    return make_profile(name, n, [](double) { return 1.0; }, [](double) { return 0.0; }, {K::kBounded, 1.0});
  }
  if (name == "cigar") {
    return make_profile(
        name, n, [](double r) { return std::tanh(r); },
        [](double r) {
          const double c = std::cosh(r);
          return 1.0 / (c * c);
        },
        {K::kBounded, 1.0});
  }
  if (name == "paraboloid") {
    return make_profile(
        name, n, [](double r) { return r / std::sqrt(1.0 + r); },
        [](double r) { return (1.0 + 0.5 * r) / std::pow(1.0 + r, 1.5); }, {K::kPolynomial, 0.5});
  }
  throw InvalidArgument("unknown profile '" + name + "'");
}

WarpedProfile sampled_profile(std::string name, int n, std::vector<double> rho, std::vector<double> f, Tail tail) {
  require(rho.size() == f.size() && rho.size() >= 4, "sampled profile needs at least 4 (rho, f) pairs");
  for (std::size_t i = 0; i < rho.size(); ++i) {
    require(std::isfinite(rho[i]) && std::isfinite(f[i]) && f[i] > 0.0, "sampled profile: f must be positive");
    require(i == 0 || rho[i] > rho[i - 1], "sampled profile: rho must be strictly increasing");
  }
  require(rho.front() >= 0.0, "sampled profile: rho must be nonnegative");
  const double r_lo = rho.front();
  const double r_hi = rho.back();
  const double f_hi = f.back();
  using Interp = boost::math::interpolators::pchip<std::vector<double>>;
  auto interp = std::make_shared<Interp>(std::move(rho), std::move(f));
  auto value = [interp, r_lo, r_hi, f_hi, tail](double r) {
    if (r <= r_hi) return (*interp)(std::max(r, r_lo));
    switch (tail.kind) {
      case Tail::Kind::kPolynomial:
        return f_hi * std::pow(r / r_hi, tail.value);
      case Tail::Kind::kExponential:
        return f_hi * std::exp(tail.value * (r - r_hi));
      case Tail::Kind::kBounded:
        return f_hi;
    }
    return f_hi;
  };
  auto slope = [interp, value, r_lo, r_hi, tail](double r) {
    if (r <= r_hi) return r < r_lo ? 0.0 : interp->prime(r);
    switch (tail.kind) {
      case Tail::Kind::kPolynomial:
        return tail.value * value(r) / r;
      case Tail::Kind::kExponential:
        return tail.value * value(r);
      case Tail::Kind::kBounded:
        return 0.0;
    }
    return 0.0;
  };
  WarpedProfile p{std::move(name), n, value, slope, tail};
  require(n >= 2, "warped profile dimension must be at least 2");
  return p;
}

double sphere_area(const WarpedProfile& profile, double rho) {
  require(rho > 0.0, "sphere_area: rho must be positive");
  return unit_sphere_area(profile.n) * std::pow(profile.f(rho), profile.n - 1);
}

double ball_volume(const WarpedProfile& profile, double rho) {
  require(rho > 0.0, "ball_volume: rho must be positive");
  const int n = profile.n;
  const double v = integrate_finite([&](double r) { return std::pow(profile.f(r), n - 1); }, 0.0, rho);
  if (!std::isfinite(v)) throw SolverError("ball_volume: quadrature failed for profile " + profile.name);
  return unit_sphere_area(n) * v;
}

AvrResult avr(const WarpedProfile& profile) {
  AvrResult out;
  const Tail& t = profile.tail;
  const int n = profile.n;
  const bool euclidean = t.kind == Tail::Kind::kPolynomial && std::abs(t.value - 1.0) < 1e-12;
  if (!euclidean) {
    const bool super = (t.kind == Tail::Kind::kPolynomial && t.value > 1.0) ||
                       (t.kind == Tail::Kind::kExponential && t.value > 0.0);
    if (super) throw InvalidArgument("avr: profile " + profile.name + " has super-Euclidean volume growth");
    out.value = 0.0;
    out.converged = true;
    out.note = "sub-Euclidean growth";
    return out;
  }
  // V(rho) / (|B^n| rho^n) and (f(rho)/rho)^(n-1) share the limit; the latter avoids the quadrature.
  double prev = kInf;
  for (int k = 1; k <= 9; ++k) {
    const double r = std::pow(10.0, k);
    const double q = std::pow(profile.f(r) / r, n - 1);
    if (std::abs(q - prev) <= 1e-6 * std::max(1.0, q)) {
      out.value = q;
      out.converged = true;
      return out;
    }
    prev = q;
    out.value = q;
  }
  out.note = "ratio did not settle by rho = 1e9";
  return out;
}

RadialCapacity radial_p_capacity(const WarpedProfile& profile, double rho0, double p) {
  require(rho0 > 0.0, "radial_p_capacity: rho0 must be positive");
  require(p > 1.0, "radial_p_capacity: p must exceed 1");
  const int n = profile.n;
  const double m = (n - 1) / (p - 1.0);
  const Tail& t = profile.tail;
  bool converges = false;
  switch (t.kind) {
    case Tail::Kind::kPolynomial:
      converges = t.value * m > 1.0;
      break;
    case Tail::Kind::kExponential:
      converges = t.value > 0.0;
      break;
    case Tail::Kind::kBounded:
      converges = false;
      break;
  }
  RadialCapacity out;
  if (!converges) {
    out.parabolic = true;
    out.integral = kInf;
    return out;
  }
  const double f0 = profile.f(rho0);
  // Integrand normalised by f(rho0) so that large m stays representable.
  auto g = [&](double r) { return std::exp(-m * std::log(profile.f(r) / f0)); };
  const double split = 2.0 * rho0 + 1.0;
  boost::math::quadrature::exp_sinh<double> es;
  const double J = integrate_endpoint(g, rho0, split) + es.integrate([&](double s) { return g(split + s); }, 1e-13);
  if (!std::isfinite(J) || J <= 0.0) throw SolverError("radial_p_capacity: quadrature failed");
  out.integral = std::pow(f0, -m) * J;
  out.capacity = unit_sphere_area(n) * std::pow(f0, n - 1) * std::pow(J, -(p - 1.0));
  return out;
}

double radial_relative_capacity(const WarpedProfile& profile, double rho0, double R, double p) {
  require(rho0 > 0.0 && R > rho0, "radial_relative_capacity: need 0 < rho0 < R");
  require(p > 1.0, "radial_relative_capacity: p must exceed 1");
  const int n = profile.n;
  const double m = (n - 1) / (p - 1.0);
  const double f0 = profile.f(rho0);
  auto g = [&](double r) { return std::exp(-m * std::log(profile.f(r) / f0)); };
  const double J = integrate_endpoint(g, rho0, R);
  if (!std::isfinite(J) || J <= 0.0) throw SolverError("radial_relative_capacity: quadrature failed");
  return unit_sphere_area(n) * std::pow(f0, n - 1) * std::pow(J, -(p - 1.0));
}

std::string to_string(RadialVerdict::Kind kind) {
  switch (kind) {
    case RadialVerdict::Kind::kHullExistsUnique:
      return "hull_exists_unique";
    case RadialVerdict::Kind::kNoSolution:
      return "no_solution";
    case RadialVerdict::Kind::kNonUniqueUnboundedVolume:
      return "non_unique_unbounded_volume";
  }
  return "unknown";
}

RadialVerdict radial_hull(const WarpedProfile& profile, double rho0) {
  require(rho0 > 0.0, "radial_hull: rho0 must be positive");
  using Kind = RadialVerdict::Kind;
  RadialVerdict v;
  const double A0 = sphere_area(profile, rho0);
  if (tail_decays_to_zero(profile.tail)) {
    v.kind = Kind::kNoSolution;
    v.inf_area = 0.0;
    v.note = "sphere area tends to 0 at infinity; the infimum is not attained";
    return v;
  }
  const auto radii = sample_radii(rho0);
  std::vector<double> A;
  A.reserve(radii.size());
  for (double r : radii) A.push_back(sphere_area(profile, r));
  const double tol = 1e-12;
  // Oscillation guard: count sign changes of the sampled slope.
  int changes = 0;
  int last_sign = 0;
  for (std::size_t i = 1; i < A.size(); ++i) {
    const double d = A[i] - A[i - 1];
    const int s = std::abs(d) <= tol * std::max(A[i], A[i - 1]) ? 0 : (d > 0 ? 1 : -1);
    if (s != 0 && last_sign != 0 && s != last_sign) ++changes;
    if (s != 0) last_sign = s;
  }
  if (changes > 2) throw SolverError("radial_hull: inconclusive, sphere area oscillates on [rho0, rho0 + 200]");

  const auto it_min = std::min_element(A.begin(), A.end());
  const double Amin = *it_min;
  v.inf_area = Amin;
  const bool flat_all = std::all_of(A.begin(), A.end(), [&](double a) { return std::abs(a - A0) <= tol * A0; });
  if (profile.tail.kind == Tail::Kind::kBounded) {
    const double Ainf = unit_sphere_area(profile.n) * std::pow(profile.tail.value, profile.n - 1);
    if (flat_all) {
      v.kind = Kind::kNonUniqueUnboundedVolume;
      v.witness_radius = rho0;
      v.inf_area = A0;
      v.note = "sphere area constant from rho0 on: every {rho < r}, r >= rho0, is a minimiser";
      return v;
    }
    if (Ainf < Amin * (1.0 - tol)) {
      v.kind = Kind::kNoSolution;
      v.inf_area = Ainf;
      v.note = "sphere area decreases to its limit at infinity; the infimum is not attained";
      return v;
    }
    // Plateau reaching the end of the sampled range at the limiting value.
    if (std::abs(A.back() - Amin) <= tol * Amin && std::abs(Ainf - Amin) <= tol * Amin) {
      std::size_t k = A.size() - 1;
      while (k > 0 && std::abs(A[k - 1] - Amin) <= tol * Amin) --k;
      v.kind = Kind::kNonUniqueUnboundedVolume;
      v.witness_radius = radii[k];
      v.note = "sphere area attains its infimum on an unbounded plateau";
      return v;
    }
  }
  // Largest minimiser gives the maximal-volume solution.
  std::size_t k = A.size() - 1;
  while (k > 0 && A[k] > Amin * (1.0 + tol)) --k;
  double r_star = radii[k];
  if (k > 0 && k + 1 < A.size()) {
    const auto res = boost::math::tools::brent_find_minima([&](double r) { return sphere_area(profile, r); },
                                                           radii[k - 1], radii[k + 1], 50);
    r_star = res.first;
    v.inf_area = std::min(Amin, res.second);
  }
  v.kind = Kind::kHullExistsUnique;
  v.witness_radius = k == 0 ? rho0 : r_star;
  v.note = k == 0 ? "sphere {rho = rho0} is strictly outward minimising among radial competitors"
                  : "hull is the ball of radius " + format_double(v.witness_radius) + " among radial competitors";
  return v;
}

RadialImcf radial_imcf(const WarpedProfile& profile, double rho0) {
  require(rho0 > 0.0, "radial_imcf: rho0 must be positive");
  for (double r : sample_radii(rho0)) {
    if (!(profile.f_prime(r) > 0.0)) {
      throw InvalidArgument("radial_imcf: f' <= 0 at rho = " + format_double(r) + "; smooth flow breaks down");
    }
  }
  RadialImcf out;
  out.rho0 = rho0;
  const int n = profile.n;
  WarpedProfile prof = profile;
  out.w = [prof, rho0, n](double rho) {
    require(rho > 0.0, "radial imcf: rho must be positive");
    return integrate_finite([&](double r) { return (n - 1) * prof.f_prime(r) / prof.f(r); }, rho0, rho);
  };
  const Tail& t = profile.tail;
  if (t.kind == Tail::Kind::kBounded) {
    out.sup = (n - 1) * std::log(t.value / profile.f(rho0));
    out.proper_but_bounded = true;
  } else {
    out.sup = kInf;
  }
  return out;
}

double mean_curvature_radial(const WarpedProfile& profile, double rho) {
  require(rho > 0.0, "mean_curvature_radial: rho must be positive");
  return (profile.n - 1) * profile.f_prime(rho) / profile.f(rho);
}

double willmore_radial(const WarpedProfile& profile, double rho) {
  require(rho > 0.0, "willmore_radial: rho must be positive");
  return unit_sphere_area(profile.n) * std::pow(profile.f_prime(rho), profile.n - 1);
}

}  // namespace hullcap
