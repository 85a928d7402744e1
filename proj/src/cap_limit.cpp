#include "hullcap/cap_limit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hullcap/detail/parallel.hpp"
#include "hullcap/errors.hpp"

namespace hullcap {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

double sharp_sobolev_constant(int n) {
  require(n >= 2, "sharp_sobolev_constant: n must be at least 2");
  return 1.0 / (n * std::pow(unit_ball_volume(n), 1.0 / n));
}

SobolevData sobolev_data(int n, double p, double C_sob) {
  require(n >= 2, "sobolev_data: n must be at least 2");
  require(p > 1.0 && p < n, "sobolev_data: need 1 < p < n");
  require(C_sob > 0.0, "sobolev_data: C_sob must be positive");
  SobolevData d;
  d.n = n;
  d.p = p;
  d.C_sob = C_sob;
  d.C_np = C_sob * (n - 1) * p / (n - p);
  d.p_star = n * p / (n - p);
  d.q_p = 1.0 + d.p_star * (p - 1.0) / p;
  return d;
}

double xu_factor(int n, double p, double C_sob) {
  const SobolevData d = sobolev_data(n, p, C_sob);
  return d.q_p * std::pow(d.C_np, (p - 1.0) / p);
}

HolopainenResult holopainen_integral(const std::function<double(double)>& volume_growth, double p, double r0,
                                     double r_max) {
  require(p > 1.0, "holopainen_integral: p must exceed 1");
  require(r0 > 0.0 && r_max > r0, "holopainen_integral: need 0 < r0 < r_max");
  const double e = 1.0 / (p - 1.0);
  auto g = [&](double t) {
    const double V = volume_growth(t);
    require(V > 0.0 && std::isfinite(V), "holopainen_integral: volume growth must be positive");
    return std::pow(t / V, e);
  };
  HolopainenResult out;
  // Integrate in log t to handle wide ranges.
  out.value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [&](double s) {
        const double t = std::exp(s);
        return g(t) * t;
      },
      std::log(r0), std::log(r_max), 20, 1e-12);
  const double ga = g(0.5 * r_max);
  const double gb = g(r_max);
  out.tail_exponent = (gb > 0.0 && ga > 0.0) ? std::log(gb / ga) / std::log(2.0) : -std::numeric_limits<double>::infinity();
  // Integrand not decaying faster than 1/t near the truncation: the tail diverges.
  out.diverges = out.tail_exponent >= -1.0 - 1e-6;
  return out;
}

DecayBound decay_bound(double p, double b, double C, double r) {
  require(p > 1.0, "decay_bound: p must exceed 1");
  require(p < b, "decay_bound: need p < b");
  require(C > 0.0 && r > 0.0, "decay_bound: C and r must be positive");
  DecayBound out;
  out.exponent = (b - p) / (p - 1.0);
  out.value = std::pow(C, 1.0 / (p - 1.0)) / ((b - p) * (p - 1.0)) * std::pow(r, -out.exponent);
  if (b - p < 0.05) out.warning = "near-critical: p close to b, prefactor 1/(b-p) is large";
  return out;
}

DecayFit fit_decay(const std::vector<double>& r, const std::vector<double>& u, double p, double b) {
  require(r.size() == u.size() && r.size() >= 2, "fit_decay: need at least two samples");
  require(p > 1.0 && p < b, "fit_decay: need 1 < p < b");
  DecayFit out;
  out.predicted_slope = -(b - p) / (p - 1.0);
  // Envelope u <= C^(1/(p-1)) K r^-e with K = 1/((b-p)(p-1)); solve for the smallest C.
  const double K = 1.0 / ((b - p) * (p - 1.0));
  double need = 0.0;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t m = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    require(r[i] > 0.0, "fit_decay: radii must be positive");
    if (u[i] <= 0.0) continue;
    need = std::max(need, u[i] / (K * std::pow(r[i], out.predicted_slope)));
    const double x = std::log(r[i]);
    const double y = std::log(u[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  require(m >= 2, "fit_decay: need two positive samples");
  out.C = std::pow(need, p - 1.0);
  out.fitted_slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  out.shape_ok = out.fitted_slope <= out.predicted_slope * (1.0 - 1e-2) ||
                 std::abs(out.fitted_slope - out.predicted_slope) <= 2e-2 * std::abs(out.predicted_slope);
  return out;
}

LimitStudy run_limit_study(const GridPtr& grid, const RegionMask& obstacle, const LimitStudyConfig& cfg) {
  require(!cfg.p_schedule.empty(), "run_limit_study: empty p schedule");
  const int n = grid->dim();
  for (std::size_t i = 0; i < cfg.p_schedule.size(); ++i) {
    const double p = cfg.p_schedule[i];
    require(p > 1.0 && p < n, "run_limit_study: p must lie in (1, n)");
    require(i == 0 || p < cfg.p_schedule[i - 1], "run_limit_study: p schedule must decrease");
  }
  LimitStudy st;
  st.p_schedule = cfg.p_schedule;
  ObstacleProblem hp = cfg.hull;
  if (!hp.grid) {
    hp.grid = grid;
    hp.obstacle = obstacle;
  }
  st.hull = compute_hull(hp);
  st.hull_perimeter = st.hull.hull_perimeter;
  st.cap1_estimate = st.hull.cap1_estimate;

  const double C_sob = cfg.C_sob > 0.0 ? cfg.C_sob : sharp_sobolev_constant(n);
  std::vector<PotentialResult> results(cfg.p_schedule.size());
  detail::parallel_for(cfg.p_schedule.size(), cfg.threads, [&](std::size_t i) {
    PLaplaceConfig pc = cfg.potential;
    pc.p = cfg.p_schedule[i];
    results[i] = solve_potential(grid, obstacle, pc);
  });

  st.capacities = StudyTable({"p", "capacity", "oracle", "oracle_gap", "xu_factor", "xu_bound"});
  st.capacities.metadata["hull_perimeter"] = format_double(st.hull_perimeter);
  st.capacities.metadata["cap1_estimate"] = format_double(st.cap1_estimate);
  st.capacities.metadata["C_sob"] = format_double(C_sob);
  const double tol = cfg.tol;
  bool ok = st.hull_perimeter <= st.cap1_estimate * (1.0 + tol);
  if (!ok) st.flags.push_back("hull perimeter exceeds the Cap_1 estimate");
  for (std::size_t i = 0; i < results.size(); ++i) {
    const double p = cfg.p_schedule[i];
    const double cap = results[i].capacity;
    const double oracle = cfg.oracle ? cfg.oracle(p) : kNaN;
    const double gap = cfg.oracle ? std::abs(cap - oracle) / oracle : kNaN;
    const double xu = xu_factor(n, p, C_sob);
    st.capacities.add_row({p, cap, oracle, gap, xu, xu * cap});
    if (!results[i].report.converged) st.flags.push_back("potential solve at p=" + format_double(p) + " not converged");
    if (st.cap1_estimate > xu * cap * (1.0 + tol)) {
      ok = false;
      st.flags.push_back("Xu bound violated at p=" + format_double(p));
    }
    if (cap < st.hull_perimeter * (1.0 - tol)) {
      ok = false;
      st.flags.push_back("Cap_p below the hull perimeter at p=" + format_double(p));
    }
  }
  st.chain_ok = ok;
  st.limit_gap = std::abs(results.back().capacity - st.hull_perimeter) / st.hull_perimeter;
  return st;
}

LimitStudy run_radial_limit_study(const WarpedProfile& profile, double rho0, const std::vector<double>& p_schedule,
                                  double tol) {
  require(!p_schedule.empty(), "run_radial_limit_study: empty p schedule");
  LimitStudy st;
  st.p_schedule = p_schedule;
  const RadialVerdict v = radial_hull(profile, rho0);
  if (v.kind == RadialVerdict::Kind::kHullExistsUnique) {
    st.hull_perimeter = sphere_area(profile, v.witness_radius);
  } else {
    st.flags.push_back("no bounded hull: " + to_string(v.kind));
    st.hull_perimeter = v.inf_area;
  }
  st.cap1_estimate = st.hull_perimeter;
  st.capacities = StudyTable({"p", "capacity", "oracle", "oracle_gap", "xu_factor", "xu_bound"});
  st.capacities.metadata["profile"] = profile.name;
  st.capacities.metadata["hull_perimeter"] = format_double(st.hull_perimeter);
  bool ok = v.kind == RadialVerdict::Kind::kHullExistsUnique;
  bool parabolic = false;
  double last = 0.0;
  for (double p : p_schedule) {
    require(p > 1.0, "run_radial_limit_study: p must exceed 1");
    const RadialCapacity c = radial_p_capacity(profile, rho0, p);
    parabolic = parabolic || c.parabolic;
    st.capacities.add_row({p, c.capacity, kNaN, kNaN, kNaN, kNaN});
    if (c.capacity < st.hull_perimeter * (1.0 - tol)) ok = false;
    last = c.capacity;
  }
  if (parabolic) st.flags.push_back("p-parabolic: capacities vanish, limit identity unavailable");
  st.chain_ok = ok && !parabolic;
  st.limit_gap = st.hull_perimeter > 0.0 ? std::abs(last - st.hull_perimeter) / st.hull_perimeter : kNaN;
  return st;
}

double extrapolate_limit(const StudyTable& capacities) {
  const auto p = capacities.column("p");
  const auto c = capacities.column("capacity");
  require(p.size() >= 2, "extrapolate_limit: need two rows");
  // Cap_p ~ L + B (p-1) log(p-1) near p = 1.
  auto x = [](double q) { return (q - 1.0) * std::log(q - 1.0); };
  const std::size_t k = p.size();
  const double x1 = x(p[k - 2]), x2 = x(p[k - 1]);
  require(x1 != x2, "extrapolate_limit: degenerate rows");
  const double B = (c[k - 2] - c[k - 1]) / (x1 - x2);
  return c[k - 1] - B * x2;
}

}  // namespace hullcap
