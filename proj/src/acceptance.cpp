#include "hullcap/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "hullcap/cap_limit.hpp"
#include "hullcap/config.hpp"
#include "hullcap/detail/parallel.hpp"
#include "hullcap/field_core.hpp"
#include "hullcap/hull_solver.hpp"
#include "hullcap/isoperimetry.hpp"
#include "hullcap/p_laplace.hpp"
#include "hullcap/runner.hpp"
#include "hullcap/shapes.hpp"
#include "hullcap/symmetrization.hpp"
#include "hullcap/warped_radial.hpp"

namespace hullcap {

namespace {

namespace bg = boost::geometry;
using BgPoint = bg::model::d2::point_xy<double>;
constexpr double kPi = std::numbers::pi;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Accumulates "key=value" items and sub-check outcomes.
class Checks {
 public:
  void value(const std::string& key, double v) {
    std::ostringstream os;
    os.precision(6);
    os << key << "=" << v;
    add(os.str());
  }
  void text(const std::string& key, const std::string& v) { add(key + "=" + v); }
  /// A sub-check; `expected` marks one that is known to be unattainable.
  void check(const std::string& name, bool ok, bool expected = false) {
    add(name + (ok ? ":ok" : ":FAIL"));
    if (!ok) (expected ? expected_fail_ : hard_fail_) = true;
  }
  void finish(CriterionResult& r) const {
    r.detail = detail_;
    r.pass = !hard_fail_ && !expected_fail_;
    r.expected_failure = !hard_fail_ && expected_fail_;
  }

 private:
  void add(const std::string& s) { detail_ += (detail_.empty() ? "" : " ") + s; }
  std::string detail_;
  bool hard_fail_ = false;
  bool expected_fail_ = false;
};

double convex_hull_perimeter(const std::vector<Vec2>& vertices) {
  bg::model::multi_point<BgPoint> pts;
  for (const auto& v : vertices) bg::append(pts, BgPoint(v[0], v[1]));
  bg::model::polygon<BgPoint> hull;
  bg::convex_hull(pts, hull);
  return bg::perimeter(hull);
}

ShapeSpec centred_star(double cx, double cy) {
  ShapeSpec s;
  s.name = "star";
  s.center = {cx, cy, 0.0};
  s.radius = 0.25;
  s.points = 5;
  s.amplitude = 0.35;
  return s;
}

TvParams hull_params() { return TvParams{.max_iters = 20000, .gap_tol = 1e-3}; }

// Ball of radius r about the origin on a grid.
RegionMask origin_ball(const GridPtr& g, double r) {
  RegionMask m(g);
  for (std::size_t i = 0; i < g->size(); ++i) {
    const Point3 c = g->center(i);
    double s = 0.0;
    for (int a = 0; a < g->dim(); ++a) s += c[a] * c[a];
    m.cells[i] = s < r * r ? 1 : 0;
  }
  return m;
}

// Positive-sector grid [0, R + pad]^n with spacing h for mirror solves.
GridPtr sector_grid(int n, double R, double h) {
  const int cells = static_cast<int>(std::ceil((R + 2.0 * h) / h / 8.0)) * 8 + 8;
  return make_grid(std::vector<int>(n, cells), h, std::vector<double>(n, 0.0));
}

// |S^{n-1}| (int_{r0}^R r^{-(n-1)/(p-1)} dr)^{1-p}.
double truncated_ball_capacity(int n, double p, double r0, double R) {
  const double m = (n - 1) / (p - 1.0);
  const double I = std::abs(m - 1.0) < 1e-12 ? std::log(R / r0) : (std::pow(R, 1.0 - m) - std::pow(r0, 1.0 - m)) / (1.0 - m);
  return unit_sphere_area(n) * std::pow(I, 1.0 - p);
}

struct Context {
  const AcceptanceOptions& opt;
  std::optional<LimitStudy> disk_study;
  double disk_seconds = 0.0;
  std::optional<LimitStudy> star_study;
  double star_seconds = 0.0;
  double star_oracle = 0.0;

  void log(const std::string& s) const {
    if (opt.log) *opt.log << s << std::flush;
  }

  const LimitStudy& disk() {
    if (!disk_study) {
      const auto t0 = std::chrono::steady_clock::now();
      const double h = opt.fast ? 1.0 / 128 : 1.0 / 256;
      const GridPtr g = sector_grid(2, 1.0, h);
      LimitStudyConfig lc;
      lc.p_schedule = {1.4, 1.2, 1.1, 1.05};
      const int full = static_cast<int>(std::lround(1.5 / h));
      const GridPtr hg = make_box_grid(2, full, -0.75, 1.5);
      lc.hull = ObstacleProblem{hg, origin_ball(hg, 0.5), 8, hull_params()};
      lc.potential.radii_schedule = {1.0};
      lc.potential.mirror = true;
      const WarpedProfile flat = preset_profile("flat", 2);
      lc.oracle = [flat](double p) { return radial_relative_capacity(flat, 0.5, 1.0, p); };
      lc.threads = opt.threads;
      disk_study = run_limit_study(g, origin_ball(g, 0.5), lc);
      disk_seconds = seconds_since(t0);
    }
    return *disk_study;
  }

  const LimitStudy& star() {
    if (!star_study) {
      const auto t0 = std::chrono::steady_clock::now();
      const int cells = opt.fast ? 66 : 132;
      const double h = 1.0 / (cells - 4);
      const GridPtr g = make_box_grid(2, cells, -0.5 - 2.0 * h, cells * h);
      const ShapeSpec s = centred_star(0.0, 0.0);
      LimitStudyConfig lc;
      lc.p_schedule = {1.05};
      lc.hull = ObstacleProblem{nullptr, {}, 8, hull_params()};
      lc.potential.radii_schedule = {0.5};
      star_study = run_limit_study(g, rasterize(s, g), lc);
      star_oracle = convex_hull_perimeter(polygon_vertices(s));
      star_seconds = seconds_since(t0);
    }
    return *star_study;
  }
};

void c1_hull_oracle(Context& ctx, Checks& ck) {
  const int N = ctx.opt.fast ? 256 : 512;
  const GridPtr g = make_box_grid(2, N, 0.0, 1.0);
  const ShapeSpec s = centred_star(0.5, 0.5);
  const auto t0 = std::chrono::steady_clock::now();
  const HullResult h = compute_hull(ObstacleProblem{g, rasterize(s, g), 8, hull_params()});
  const double t = seconds_since(t0);
  const double oracle = convex_hull_perimeter(polygon_vertices(s));
  const double err = std::abs(h.hull_perimeter - oracle) / oracle;
  ck.value("grid", N);
  ck.value("hull_perimeter", h.hull_perimeter);
  ck.value("oracle", oracle);
  ck.value("rel_err", err);
  ck.check("within_2pct", err <= 0.02);
  ck.check("under_60s", t < 60.0);
}

void c2_outward(Context& ctx, Checks& ck) {
  const int N = ctx.opt.fast ? 256 : 512;
  const GridPtr g = make_box_grid(2, N, 0.0, 1.0);
  ShapeSpec disk;
  disk.center = {0.5, 0.5, 0.0};
  disk.radius = 0.25;
  ShapeSpec blob = disk;
  blob.name = "blob";
  blob.fourier = {0.0, 0.0, 0.15};
  const ShapeSpec star = centred_star(0.5, 0.5);
  const std::vector<ShapeSpec> shapes{disk, blob, star};
  std::vector<OutwardVerdict> res(shapes.size());
  detail::parallel_for(shapes.size(), ctx.opt.threads,
                       [&](std::size_t i) { res[i] = is_outward_minimising(rasterize(shapes[i], g), 1e-2, hull_params()); });
  ck.value("disk_gap", res[0].gap);
  ck.value("blob_gap", res[1].gap);
  ck.check("disk_gap_le_1pct", std::abs(res[0].gap) <= 0.01);
  ck.check("blob_gap_le_1pct", std::abs(res[1].gap) <= 0.01);
  const double p_star = polygon_perimeter(polygon_vertices(star));
  const double oracle = (p_star - convex_hull_perimeter(polygon_vertices(star))) / p_star;
  ck.value("star_gap", res[2].gap);
  ck.value("star_oracle_gap", oracle);
  ck.check("star_gap_within_0.02", std::abs(res[2].gap - oracle) <= 0.02);
}

ShapeSpec random_preset(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto uni = [&](double a, double b) { return a + (b - a) * U(rng); };
  const auto& names = shape_names();
  ShapeSpec s;
  s.name = names[static_cast<std::size_t>(U(rng) * names.size()) % names.size()];
  s.center = {0.5 + uni(-0.05, 0.05), 0.5 + uni(-0.05, 0.05), 0.0};
  if (s.name == "disk") {
    s.radius = uni(0.1, 0.28);
  } else if (s.name == "square") {
    s.radius = uni(0.08, 0.22);
  } else if (s.name == "star") {
    s.radius = uni(0.15, 0.3);
    s.points = 3 + static_cast<int>(U(rng) * 5);
    s.amplitude = uni(0.1, 0.5);
    s.rotation = uni(0.0, 2.0 * kPi);
  } else if (s.name == "dumbbell") {
    s.side = uni(0.1, 0.16);
    s.gap = uni(0.05, 0.2);
    s.bar_width = uni(0.02, 0.06);
  } else if (s.name == "cross") {
    s.arm_length = uni(0.15, 0.3);
    s.arm_width = uni(0.04, 0.12);
  } else {
    s.radius = uni(0.15, 0.24);
    s.fourier = {uni(-0.15, 0.15), uni(-0.15, 0.15), uni(-0.15, 0.15)};
  }
  return s;
}

void c3_idempotence(Context& ctx, Checks& ck) {
  const int N = 128;
  const int instances = ctx.opt.fast ? 6 : 20;
  const GridPtr g = make_box_grid(2, N, 0.0, 1.0);
  std::mt19937_64 rng(ctx.opt.seed + 3);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<RegionMask> S, T;
  for (int k = 0; k < instances; ++k) {
    const ShapeSpec s = random_preset(rng);
    ShapeSpec d;
    d.radius = 0.06;
    d.center = {s.center[0] + 0.4 * (U(rng) - 0.5), s.center[1] + 0.4 * (U(rng) - 0.5), 0.0};
    S.push_back(rasterize(s, g));
    T.push_back(mask_union(S.back(), rasterize(d, g)));
  }
  std::vector<int> idem(instances, 0), mono(instances, 0);
  detail::parallel_for(static_cast<std::size_t>(instances), ctx.opt.threads, [&](std::size_t k) {
    const RegionMask h1 = compute_hull(ObstacleProblem{g, S[k], 8, hull_params()}).hull;
    const RegionMask h2 = compute_hull(ObstacleProblem{g, h1, 8, hull_params()}).hull;
    const RegionMask hT = compute_hull(ObstacleProblem{g, T[k], 8, hull_params()}).hull;
    idem[k] = equal_up_to(h1, h2, 1) ? 1 : 0;
    mono[k] = is_subset_up_to(h1, hT, 1) ? 1 : 0;
  });
  const int ni = static_cast<int>(std::count(idem.begin(), idem.end(), 1));
  const int nm = static_cast<int>(std::count(mono.begin(), mono.end(), 1));
  ck.value("instances", instances);
  ck.value("idempotent", ni);
  ck.value("monotone", nm);
  ck.check("idempotence", ni == instances);
  ck.check("monotonicity", nm == instances);
}

void c4_radial_capacity(Context& ctx, Checks& ck) {
  double worst_1d = 0.0;
  for (int n : {2, 3}) {
    const WarpedProfile flat = preset_profile("flat", n);
    for (double p : {1.2, 1.5, 2.0}) {
      const double R = n == 2 ? 1.0 : 0.5;
      const double closed = truncated_ball_capacity(n, p, 0.25, R);
      worst_1d = std::max(worst_1d, std::abs(radial_relative_capacity(flat, 0.25, R, p) - closed) / closed);
      const RadialCapacity ext = radial_p_capacity(flat, 1.0, p);
      if (p < n) {
        const double e = unit_sphere_area(n) * std::pow((n - p) / (p - 1.0), p - 1.0);
        worst_1d = std::max(worst_1d, std::abs(ext.capacity - e) / e);
      } else {
        ck.check("parabolic_n" + std::to_string(n) + "_p" + format_double(p), ext.parabolic && ext.capacity == 0.0);
      }
    }
  }
  ck.value("max_rel_err_1d", worst_1d);
  ck.check("1d_within_0.5pct", worst_1d <= 5e-3);

  struct Case {
    int n;
    double p;
  };
  std::vector<Case> cases;
  for (int n : {2, 3}) {
    for (double p : {1.2, 1.5, 2.0}) cases.push_back({n, p});
  }
  std::vector<double> err(cases.size());
  const double h = ctx.opt.fast ? 1.0 / 128 : 1.0 / 256;
  detail::parallel_for(cases.size(), ctx.opt.threads, [&](std::size_t i) {
    const int n = cases[i].n;
    const double R = n == 2 ? 1.0 : 0.5;
    const GridPtr g = sector_grid(n, R, h);
    PLaplaceConfig pc;
    pc.p = cases[i].p;
    pc.radii_schedule = {R};
    pc.mirror = true;
    const PotentialResult r = solve_potential(g, origin_ball(g, 0.25), pc);
    const double closed = truncated_ball_capacity(n, pc.p, 0.25, R);
    err[i] = std::abs(r.capacity - closed) / closed;
  });
  double worst = 0.0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    ck.value("grid_err_n" + std::to_string(cases[i].n) + "_p" + format_double(cases[i].p), err[i]);
    worst = std::max(worst, err[i]);
  }
  ck.check("grid_within_1.5pct", worst <= 1.5e-2);
}

void c5_limit(Context& ctx, Checks& ck) {
  const LimitStudy& d = ctx.disk();
  const auto caps = d.capacities.column("capacity");
  const auto gaps = d.capacities.column("oracle_gap");
  double worst = 0.0;
  for (double gp : gaps) worst = std::max(worst, gp);
  ck.value("max_oracle_gap", worst);
  ck.check("disk_within_1pct_of_radial_oracle", worst <= 1e-2);
  const double cap105 = caps.back();
  ck.value("disk_cap_1.05", cap105);
  ck.value("disk_dev_from_pi", std::abs(cap105 - kPi) / kPi);
  ck.check("disk_cap_1.05_within_3pct_of_pi", std::abs(cap105 - kPi) <= 0.03 * kPi, true);
  const LimitStudy& s = ctx.star();
  const double sc = s.capacities.column("capacity").back();
  ck.value("star_cap_1.05", sc);
  ck.value("star_hull_perimeter_exact", ctx.star_oracle);
  ck.value("star_dev", std::abs(sc - ctx.star_oracle) / ctx.star_oracle);
  ck.check("star_cap_1.05_within_5pct", std::abs(sc - ctx.star_oracle) <= 0.05 * ctx.star_oracle, true);
  ck.check("under_10min", ctx.disk_seconds + ctx.star_seconds < 600.0);
}

void c6_chain(Context& ctx, Checks& ck) {
  const LimitStudy& d = ctx.disk();
  const LimitStudy& s = ctx.star();
  for (const auto* st : {&d, &s}) {
    for (const auto& f : st->flags) ck.text("flag", "'" + f + "'");
  }
  ck.check("disk_chain", d.chain_ok);
  ck.check("star_chain", s.chain_ok);
  const double p = 1.0 + std::ldexp(1.0, -10);
  for (int n : {2, 3}) {
    const double x = xu_factor(n, p, sharp_sobolev_constant(n)) - 1.0;
    ck.value("xu_minus_1_n" + std::to_string(n), x);
    ck.check("xu_n" + std::to_string(n), x <= 1e-3);
  }
}

void c7_trichotomy(Context&, Checks& ck) {
  const auto t0 = std::chrono::steady_clock::now();
  using K = RadialVerdict::Kind;
  const std::vector<std::pair<std::string, K>> expect{
      {"cusp", K::kNoSolution}, {"cylinder", K::kNonUniqueUnboundedVolume}, {"cigar", K::kHullExistsUnique}};
  for (const auto& [name, kind] : expect) {
    const RadialVerdict v = radial_hull(preset_profile(name, 2), 1.0);
    ck.text(name, to_string(v.kind));
    ck.check(name + "_verdict", v.kind == kind);
  }
  const WarpedProfile cigar = preset_profile("cigar", 2);
  for (double p : {1.2, 1.5, 2.0}) {
    const RadialCapacity c = radial_p_capacity(cigar, 1.0, p);
    ck.check("cigar_parabolic_p" + format_double(p), c.parabolic && c.capacity == 0.0);
  }
  ck.check("under_5s", seconds_since(t0) < 5.0);
}

void c8_cigar_imcf(Context& ctx, Checks& ck) {
  const WarpedProfile cigar = preset_profile("cigar", 2);
  const RadialImcf im = radial_imcf(cigar, 1.0);
  double worst = 0.0;
  for (double r : {1.25, 1.5, 2.0, 3.0, 5.0, 10.0}) {
    worst = std::max(worst, std::abs(im.w(r) - std::log(std::tanh(r) / std::tanh(1.0))));
  }
  ck.value("max_quadrature_err", worst);
  ck.check("closed_form", worst <= 1e-9);
  ck.value("sup", im.sup);
  ck.check("proper_but_bounded", im.proper_but_bounded);

  // Conformal model: g = (dx^2 + dy^2) / (1 + |x|^2), rho = asinh |x|.
  const std::vector<int> levels = ctx.opt.fast ? std::vector<int>{48, 96} : std::vector<int>{64, 128, 256};
  std::vector<double> res;
  std::vector<double> hs;
  for (int N : levels) {
    const double L = 4.0;
    const GridPtr flat = make_box_grid(2, N, -L, 2.0 * L);
    std::vector<double> phi(flat->size());
    ScalarField w(flat);
    RegionMask region(flat);
    for (std::size_t i = 0; i < flat->size(); ++i) {
      const Point3 c = flat->center(i);
      const double r = std::hypot(c[0], c[1]);
      phi[i] = 1.0 / std::sqrt(1.0 + r * r);
      w.values[i] = std::log(r / std::sqrt(1.0 + r * r) / std::tanh(1.0));
      region.cells[i] = r >= 1.5 && r <= 3.5 ? 1 : 0;
    }
    const GridPtr g = flat->with_conformal_factor(phi);
    w.grid = g;
    region.grid = g;
    const LevelSetResidual lr = level_set_residual(w, 1e-8, &region);
    res.push_back(lr.mean_abs);
    hs.push_back(flat->spacing());
    ck.value("residual_h" + format_double(flat->spacing()), lr.mean_abs);
  }
  bool rate = true;
  for (std::size_t i = 1; i < res.size(); ++i) {
    const double order = std::log(res[i - 1] / res[i]) / std::log(hs[i - 1] / hs[i]);
    ck.value("order", order);
    rate = rate && order >= 0.9;
  }
  ck.check("residual_at_least_first_order", rate);
}

void c9_cones(Context&, Checks& ck) {
  const int n = 3;
  const double a = 0.5;
  const WarpedProfile cone = preset_profile("cone", n, a);
  const double avr_exact = std::pow(a, n - 1);
  const double S = unit_sphere_area(n);
  const double B = unit_ball_volume(n);
  const double willmore_sharp = avr_exact * S;
  const double iso_sharp = avr_exact * std::pow(S, n) / std::pow(B, n - 1);
  double wm = 0.0, iso = 0.0;
  for (double rho : {0.5, 1.0, 2.0, 5.0, 10.0}) {
    wm = std::max(wm, std::abs(willmore_radial(cone, rho) - willmore_sharp) / willmore_sharp);
    const double P = sphere_area(cone, rho);
    const double V = ball_volume(cone, rho);
    iso = std::max(iso, std::abs(std::pow(P, n) / std::pow(V, n - 1) - iso_sharp) / iso_sharp);
  }
  const double avr_err = std::abs(avr(cone).value - avr_exact);
  ck.value("willmore_rel_err", wm);
  ck.value("iso_rel_err", iso);
  ck.value("avr_err", avr_err);
  ck.check("willmore", wm <= 1e-8);
  ck.check("iso_ratio", iso <= 1e-8);
  ck.check("avr", avr_err <= 1e-8);
}

void c10_dini(Context& ctx, Checks& ck) {
  const int m = ctx.opt.fast ? 64 : 128;
  const int pad = 4;
  const double h = 1.0 / m;
  const GridPtr g = make_grid({m + 2 * pad, m + 2 * pad}, h, {-pad * h, -pad * h});
  RegionMask U(g);
  for (std::size_t i = 0; i < g->size(); ++i) {
    const Index3 c = g->coords(i);
    U.cells[i] = c[0] >= pad && c[0] < pad + m && c[1] >= pad && c[1] < pad + m ? 1 : 0;
  }
  const std::vector<double> fractions{0.02, 0.05, 0.1, 0.2, 0.35, 0.5, 0.7, 0.9};
  const IsoProfile prof = iso_profile(U, fractions, {}, ctx.opt.threads);
  const DiniResult d = dini_comparison(prof, 2.0 * kPi);
  double min_inc = 0.0;
  for (double x : d.increments) min_inc = std::min(min_inc, x);
  ck.value("min_increment_over_scale", min_inc / d.scale);
  ck.check("dini_monotone", d.monotone_ok);
  double worst = 0.0;
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    if (fractions[i] > 0.5) continue;
    const double v = prof.volumes[i];
    worst = std::max(worst, std::abs(prof.areas[i] - 2.0 * std::sqrt(kPi * v)) / (2.0 * std::sqrt(kPi * v)));
  }
  ck.value("small_volume_max_rel_err", worst);
  ck.check("small_volumes_within_2pct", worst <= 0.02);
}

void c11_polya_szego(Context& ctx, Checks& ck) {
  const int N = ctx.opt.fast ? 128 : 512;
  const int trials = ctx.opt.fast ? 20 : 100;
  const GridPtr g = make_grid({N, N}, 1.0 / N, {0.0, 0.0});
  const auto t0 = std::chrono::steady_clock::now();
  const CampaignResult r = polya_szego_campaign(g, trials, 12345 + ctx.opt.seed, 2048, ctx.opt.threads);
  const double t = seconds_since(t0);
  ck.value("held", r.held);
  ck.value("trials", r.trials);
  ck.value("max_l2_defect", r.max_l2_defect);
  ck.check("all_hold", r.held == r.trials);
  ck.check("defect_le_1e-4", r.max_l2_defect <= 1e-4);
  ck.check("under_5min", t < 300.0);
}

void c12_faber_krahn(Context& ctx, Checks& ck) {
  const int N = ctx.opt.fast ? 128 : 256;
  const GridPtr gs = make_grid({N, N}, 1.0 / N, {0.0, 0.0});
  const RegionMask square(gs, true);
  const double lam_sq = first_eigenvalue(square).lambda1;
  const double exact_sq = 2.0 * kPi * kPi;
  ck.value("square", lam_sq);
  ck.check("square_within_1pct", std::abs(lam_sq - exact_sq) <= 1e-2 * exact_sq);

  const int half = ctx.opt.fast ? 66 : 258;
  const double h = 1.0 / (half - 2);
  const GridPtr gd = make_grid({2 * half, 2 * half}, h, {-half * h, -half * h});
  const double lam_disk = first_eigenvalue(origin_ball(gd, 1.0)).lambda1;
  const double exact_disk = std::pow(boost::math::cyl_bessel_j_zero(0.0, 1), 2);
  ck.value("disk", lam_disk);
  ck.check("disk_within_1pct", std::abs(lam_disk - exact_disk) <= 1e-2 * exact_disk);

  const double bound = ball_first_eigenvalue(2, 1.0);
  ck.value("bound", bound);
  ck.check("square_above_bound", lam_sq >= bound);
  ck.check("bound_is_18.17", std::abs(bound - 18.17) <= 5e-3);
  const GridPtr gsmall = make_grid({64, 64}, 1.0 / 64, {0.0, 0.0});
  const FaberKrahnResult f1 = faber_krahn_check(RegionMask(gsmall, true), 1.0);
  const FaberKrahnResult fq = faber_krahn_check(RegionMask(gsmall, true), 0.25);
  const double scale_err = std::abs(fq.bound / f1.bound - 0.25);
  ck.value("avr_scaling_err", scale_err);
  ck.check("avr_scaling_exact", scale_err <= 1e-12 && f1.holds && fq.holds);
}

void c13_j_functional(Context& ctx, Checks& ck) {
  const int N = ctx.opt.fast ? 128 : 256;
  const GridPtr g = make_box_grid(2, N, -1.0, 2.0);
  ScalarField w(g);
  RegionMask window(g);
  std::vector<double> cut(g->size(), 0.0);
  for (std::size_t i = 0; i < g->size(); ++i) {
    const Point3 c = g->center(i);
    const double r = std::hypot(c[0], c[1]);
    w.values[i] = std::log(r / 0.25);
    window.cells[i] = r >= 0.35 && r <= 0.9 ? 1 : 0;
    if (r > 0.4 && r < 0.85) cut[i] = std::pow(std::sin(kPi * (r - 0.4) / 0.45), 2);
  }
  const int trials = 50;
  std::vector<JValues> res(trials);
  detail::parallel_for(static_cast<std::size_t>(trials), ctx.opt.threads, [&](std::size_t k) {
    std::mt19937_64 rng(ctx.opt.seed + 1300 + k);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const int bumps = 1 + static_cast<int>(U(rng) * 4);
    ScalarField v = w;
    for (int b = 0; b < bumps; ++b) {
      const double amp = U(rng) - 0.5;
      const double sigma = 0.05 + 0.15 * U(rng);
      const double rad = 0.4 + 0.45 * U(rng);
      const double ang = 2.0 * kPi * U(rng);
      const double cx = rad * std::cos(ang), cy = rad * std::sin(ang);
      for (std::size_t i = 0; i < g->size(); ++i) {
        if (cut[i] == 0.0) continue;
        const Point3 c = g->center(i);
        const double d2 = (c[0] - cx) * (c[0] - cx) + (c[1] - cy) * (c[1] - cy);
        v.values[i] += cut[i] * amp * std::exp(-d2 / (2.0 * sigma * sigma));
      }
    }
    res[k] = imcf_functional(w, v, window);
  });
  int wins = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  for (const auto& r : res) {
    wins += r.Jw <= r.Jv ? 1 : 0;
    min_margin = std::min(min_margin, (r.Jv - r.Jw) / std::abs(r.Jw));
  }
  ck.value("trials", trials);
  ck.value("w_wins", wins);
  ck.value("min_rel_margin", min_margin);
  ck.check("all_trials", wins == trials);
}

void c14_determinism(Context& ctx, Checks& ck) {
  RunConfig c;
  c.command = "verify";
  c.fast = true;
  c.only = {1, 7, 9, 13};
  c.deterministic = true;
  c.seed = ctx.opt.seed;
  c.threads = ctx.opt.threads;
  c.output = (std::filesystem::path(ctx.opt.scratch_dir) / "determinism").string();
  RunOptions ro;
  ro.force = true;
  const RunManifest a = run(c, ro);
  const RunManifest b = run(c, ro);
  ck.value("manifest_bytes", static_cast<double>(a.text.size()));
  ck.text("sha256", sha256_hex(a.text).substr(0, 16));
  ck.check("authoritative", a.authoritative && b.authoritative && !a.cache_hit && !b.cache_hit);
  ck.check("bit_identical", a.text == b.text);
  const RunManifest cached = run(c, RunOptions{});
  ck.check("cache_hit_identical", cached.cache_hit && cached.text == a.text);
}

struct Criterion {
  int id;
  const char* name;
  void (*fn)(Context&, Checks&);
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {1, "hull perimeter vs convex-hull oracle", c1_hull_oracle},
      {2, "outward-minimising gaps", c2_outward},
      {3, "hull idempotence and monotonicity", c3_idempotence},
      {4, "ball capacities vs closed form", c4_radial_capacity},
      {5, "capacity limit p -> 1", c5_limit},
      {6, "capacity chain and Xu bound", c6_chain},
      {7, "pathology trichotomy", c7_trichotomy},
      {8, "cigar arrival time", c8_cigar_imcf},
      {9, "cone Willmore and isoperimetric equalities", c9_cones},
      {10, "isoperimetric profile comparison", c10_dini},
      {11, "Polya-Szego campaign", c11_polya_szego},
      {12, "Faber-Krahn", c12_faber_krahn},
      {13, "J-functional minimality", c13_j_functional},
      {14, "determinism", c14_determinism},
  };
  return all;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
  for (int k : options.only) require(k >= 1 && k <= kCriterionCount, "run_acceptance: criterion out of range");
  Context ctx{options, {}, 0.0, {}, 0.0, 0.0};
  std::vector<CriterionResult> out;
  for (const auto& c : criteria()) {
    if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), c.id) == options.only.end()) {
      continue;
    }
    CriterionResult r;
    r.id = c.id;
    r.name = c.name;
    Checks ck;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.fn(ctx, ck);
      ck.finish(r);
    } catch (const std::exception& e) {
      ck.finish(r);
      r.pass = false;
      r.expected_failure = false;
      r.detail += std::string(r.detail.empty() ? "" : " ") + "error='" + e.what() + "'";
    }
    r.seconds = options.deterministic ? 0.0 : seconds_since(t0);
    ctx.log(format_result(r) + "\n");
    out.push_back(std::move(r));
  }
  return out;
}

bool acceptance_ok(const std::vector<CriterionResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CriterionResult& r) { return r.pass || r.expected_failure; });
}

std::string format_result(const CriterionResult& r) {
  const char* status = r.pass ? "[PASS]" : (r.expected_failure ? "[XFAIL]" : "[FAIL]");
  std::ostringstream os;
  os << status << " " << r.id << " " << r.name;
  if (r.seconds > 0.0) {
    os.precision(3);
    os << " (" << r.seconds << " s)";
  }
  os << ": " << r.detail;
  return os.str();
}

std::string results_csv(const std::vector<CriterionResult>& results) {
  auto quoted = [](const std::string& s) {
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  };
  std::ostringstream os;
  os << "id,name,status,seconds,detail\n";
  for (const auto& r : results) {
    os << r.id << "," << quoted(r.name) << "," << (r.pass ? "pass" : (r.expected_failure ? "expected-fail" : "fail"))
       << "," << format_double(r.seconds) << "," << quoted(r.detail) << "\n";
  }
  return os.str();
}

}  // namespace hullcap
