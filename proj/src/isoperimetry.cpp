#include "hullcap/isoperimetry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "hullcap/detail/parallel.hpp"
#include "hullcap/errors.hpp"
#include "hullcap/field_core.hpp"
#include "hullcap/warped_radial.hpp"

namespace hullcap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Squared distance transform along one line (Felzenszwalb-Huttenlocher).
void edt_line(const double* f, double* d, int len, std::vector<int>& v, std::vector<double>& z) {
  v.assign(len, 0);
  z.assign(len + 1, 0.0);
  int k = 0;
  int first = -1;
  for (int q = 0; q < len; ++q) {
    if (std::isfinite(f[q])) {
      first = q;
      break;
    }
  }
  if (first < 0) {
    for (int q = 0; q < len; ++q) d[q] = kInf;
    return;
  }
  v[0] = first;
  z[0] = -kInf;
  z[1] = kInf;
  for (int q = first + 1; q < len; ++q) {
    if (!std::isfinite(f[q])) continue;
    double s;
    while (true) {
      const int r = v[k];
      s = ((f[q] + double(q) * q) - (f[r] + double(r) * r)) / (2.0 * (q - r));
      if (s > z[k]) break;
      --k;
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  k = 0;
  for (int q = 0; q < len; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = q - v[k];
    d[q] = dq * dq + f[v[k]];
  }
}

// Squared Euclidean distance (in cells) from each cell centre to the nearest feature cell centre.
std::vector<double> squared_edt(const Grid& g, const std::vector<std::uint8_t>& feature) {
  std::vector<double> D(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) D[i] = feature[i] ? 0.0 : kInf;
  std::vector<int> v;
  std::vector<double> z, line, out;
  const auto& st = g.strides();
  for (int a = 0; a < g.dim(); ++a) {
    const int len = g.extent(a);
    line.resize(len);
    out.resize(len);
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
      if (g.coords(idx)[a] != 0) continue;
      for (int q = 0; q < len; ++q) line[q] = D[idx + q * st[a]];
      edt_line(line.data(), out.data(), len, v, z);
      for (int q = 0; q < len; ++q) D[idx + q * st[a]] = out[q];
    }
  }
  return D;
}

// Signed distance to the boundary of `set`, negative inside, in physical units.
std::vector<double> signed_distance(const RegionMask& set) {
  const Grid& g = *set.grid;
  const double h = g.spacing();
  std::vector<std::uint8_t> outside(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) outside[i] = set.cells[i] ? 0 : 1;
  const auto din = squared_edt(g, set.cells);
  const auto dout = squared_edt(g, outside);
  std::vector<double> d(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    d[i] = set.cells[i] ? -h * (std::sqrt(dout[i]) - 0.5) : h * (std::sqrt(din[i]) - 0.5);
  }
  return d;
}

double container_volume(const RegionMask& m) {
  double v = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m.cells[i]) v += m.grid->cell_volume(i);
  }
  return v;
}

// Cells of `container` in increasing order of `key` (ties by index), filled up to volume v.
RegionMask fill_lowest(const RegionMask& container, const std::vector<double>& key, double v, double* level) {
  const Grid& g = *container.grid;
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (container.cells[i]) order.push_back(i);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return key[a] < key[b] || (key[a] == key[b] && a < b);
  });
  RegionMask out(container.grid);
  double acc = 0.0;
  std::size_t k = 0;
  while (k < order.size()) {
    const double cv = g.cell_volume(order[k]);
    if (acc + 0.5 * cv > v) break;
    acc += cv;
    out.cells[order[k]] = 1;
    ++k;
  }
  if (level) {
    const double a = k > 0 ? key[order[k - 1]] : key[order[0]];
    const double b = k < order.size() ? key[order[k]] : a;
    *level = 0.5 * (a + b);
  }
  return out;
}

Point3 seed_point(const RegionMask& container, const std::string& seed) {
  const Grid& g = *container.grid;
  Point3 p{0.0, 0.0, 0.0};
  if (seed == "center") {
    double w = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!container.cells[i]) continue;
      const Point3 c = g.center(i);
      const double cv = g.cell_volume(i);
      for (int a = 0; a < 3; ++a) p[a] += cv * c[a];
      w += cv;
    }
    for (auto& x : p) x /= w;
    return p;
  }
  if (seed == "corner") {
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (container.cells[i]) return g.center(i);
    }
  }
  if (seed == "wall") {
    const Point3 c = seed_point(container, "center");
    double best = kInf;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!container.cells[i]) continue;
      const Point3 x = g.center(i);
      double off = 0.0;
      for (int a = 1; a < g.dim(); ++a) off += (x[a] - c[a]) * (x[a] - c[a]);
      const double score = x[0] + 4.0 * std::sqrt(off);
      if (score < best) {
        best = score;
        p = x;
      }
    }
    return p;
  }
  throw InvalidArgument("unknown isoperimetric seed '" + seed + "' (expected center, corner or wall)");
}

struct Flow {
  RegionMask set;
  double area = 0.0;
  double multiplier = 0.0;
  SolveReport report;
};

Flow run_flow(const RegionMask& container, double v, const std::string& seed, const IsoConfig& cfg) {
  const GridPtr& gp = container.grid;
  const Grid& g = *gp;
  const int n = g.dim();
  const double h = g.spacing();
  const std::size_t N = g.size();
  const double rv = std::pow(v / unit_ball_volume(n), 1.0 / n);
  const double tau = cfg.tau_factor * h * rv;
  // Level sets near the threshold only see d close to zero.
  const double clip = std::max(20.0 * h, 8.0 * tau * (n - 1) / rv);
  const double fixed = clip + h;

  const Point3 c0 = seed_point(container, seed);
  std::vector<double> dist(N);
  for (std::size_t i = 0; i < N; ++i) {
    const Point3 x = g.center(i);
    double s = 0.0;
    for (int a = 0; a < n; ++a) s += (x[a] - c0[a]) * (x[a] - c0[a]);
    dist[i] = s;
  }
  RegionMask set = fill_lowest(container, dist, v, nullptr);

  TvProblem pb;
  pb.grid = gp;
  pb.boundary = TvBoundary::kNeumann;
  pb.lower.assign(N, -kInf);
  pb.upper.assign(N, kInf);
  pb.fidelity.assign(N, 0.0);
  pb.data.assign(N, 0.0);
  for (std::size_t i = 0; i < N; ++i) {
    if (container.cells[i]) {
      pb.fidelity[i] = g.cell_volume(i) / tau;
    } else {
      pb.lower[i] = pb.upper[i] = fixed;
    }
  }

  Flow best;
  best.area = kInf;
  best.report.solver = "volume-preserving minimising movements";
  TvSolution sol;
  RegionMask prev2;
  int step = 0;
  int rof_iters = 0;
  bool settled = false;
  for (step = 1; step <= cfg.max_steps; ++step) {
    const auto d = signed_distance(set);
    for (std::size_t i = 0; i < N; ++i) pb.data[i] = std::clamp(d[i], -clip, clip);
    sol = solve_tv(pb, cfg.rof, sol.u.empty() ? nullptr : &sol);
    rof_iters += sol.report.iterations;
    double level = 0.0;
    RegionMask next = fill_lowest(container, sol.u, v, &level);
    const double area = mollified_perimeter(next);
    if (area < best.area) {
      best.set = next;
      best.area = area;
      best.multiplier = level / tau;
    }
    const std::size_t changed = symmetric_difference_count(next, set);
    const bool cycling = !prev2.cells.empty() && next == prev2;
    prev2 = set;
    set = std::move(next);
    if (changed <= static_cast<std::size_t>(cfg.settle_cells) || cycling) {
      settled = true;
      break;
    }
  }
  best.report.iterations = std::min(step, cfg.max_steps);
  best.report.objective = best.area;
  best.report.converged = settled;
  best.report.notes.push_back("seed " + seed + ", " + std::to_string(rof_iters) + " inner iterations");
  if (!settled) best.report.notes.push_back("flow did not settle within " + std::to_string(cfg.max_steps) + " steps");
  return best;
}

}  // namespace

double iso_ratio(const RegionMask& mask) {
  require(mask.grid != nullptr, "iso_ratio: mask has no grid");
  const Measure m = measure(mask, PerimeterEstimator::kMollified);
  require(m.volume > 0.0, "iso_ratio: zero volume");
  const int n = mask.grid->dim();
  return std::pow(m.perimeter, n) / std::pow(m.volume, n - 1);
}

double conical_profile(double v, double W, int n) {
  require(v >= 0.0 && W > 0.0 && n >= 2, "conical_profile: need v >= 0, W > 0, n >= 2");
  const double e = (n - 1.0) / n;
  return std::pow(n, e) * std::pow(W, 1.0 / n) * std::pow(v, e);
}

IsoSet constrained_isoperimetric(const RegionMask& container, double v, const IsoConfig& cfg) {
  require(container.grid != nullptr, "constrained_isoperimetric: container has no grid");
  require(cfg.tau_factor > 0.0 && cfg.max_steps > 0, "constrained_isoperimetric: bad flow parameters");
  require(!cfg.seeds.empty(), "constrained_isoperimetric: no seeds");
  const double U = container_volume(container);
  require(v > 0.0 && v < U, "constrained_isoperimetric: need 0 < v < |container|");
  require(boundary_clearance(container) >= 1, "constrained_isoperimetric: container must not touch the grid boundary");
  const double cell = container.grid->cell_volume(0);
  require(v >= 4.0 * cell, "constrained_isoperimetric: volume below four cells");

  IsoSet out;
  out.area = kInf;
  for (const auto& seed : cfg.seeds) {
    Flow f = run_flow(container, v, seed, cfg);
    if (f.area < out.area) {
      out.set = std::move(f.set);
      out.area = f.area;
      out.multiplier = f.multiplier;
      out.seed = seed;
      out.report = std::move(f.report);
    }
  }
  out.volume = container_volume(out.set);
  return out;
}

StudyTable IsoProfile::table() const {
  StudyTable t({"v", "I", "multiplier", "converged"});
  for (std::size_t i = 0; i < volumes.size(); ++i) {
    t.add_row({volumes[i], areas[i], multipliers[i], reports[i].converged ? 1.0 : 0.0});
  }
  return t;
}

IsoProfile iso_profile(const RegionMask& container, const std::vector<double>& volumes, const IsoConfig& cfg,
                       int threads) {
  require(!volumes.empty(), "iso_profile: no volumes");
  for (std::size_t i = 1; i < volumes.size(); ++i) {
    require(volumes[i] > volumes[i - 1], "iso_profile: volumes must increase");
  }
  IsoProfile p;
  p.container = container;
  p.volumes = volumes;
  std::vector<IsoSet> sets(volumes.size());
  detail::parallel_for(volumes.size(), threads,
                       [&](std::size_t i) { sets[i] = constrained_isoperimetric(container, volumes[i], cfg); });
  for (auto& s : sets) {
    p.areas.push_back(s.area);
    p.multipliers.push_back(s.multiplier);
    p.reports.push_back(std::move(s.report));
  }
  return p;
}

DiniResult dini_comparison(const std::vector<double>& volumes, const std::vector<double>& areas, double W, int n,
                           double tol) {
  require(volumes.size() == areas.size(), "dini_comparison: volumes and areas differ in length");
  require(volumes.size() >= 8, "dini_comparison: need at least 8 samples");
  require(W > 0.0 && n >= 2, "dini_comparison: need W > 0, n >= 2");
  const double e = double(n) / (n - 1);
  DiniResult out;
  std::vector<double> J(volumes.size());
  for (std::size_t i = 0; i < volumes.size(); ++i) {
    require(i == 0 || volumes[i] > volumes[i - 1], "dini_comparison: volumes must increase");
    const double Ie = std::pow(areas[i], e);
    J[i] = Ie - std::pow(conical_profile(volumes[i], W, n), e);
    out.scale = std::max(out.scale, std::abs(Ie));
  }
  out.monotone_ok = true;
  for (std::size_t i = 1; i < J.size(); ++i) {
    out.increments.push_back(J[i] - J[i - 1]);
    if (out.increments.back() < -tol * out.scale) out.monotone_ok = false;
  }
  return out;
}

DiniResult dini_comparison(const IsoProfile& profile, double W, double tol) {
  return dini_comparison(profile.volumes, profile.areas, W, profile.container.grid->dim(), tol);
}

CurvatureReport mean_curvature_bounds_check(const RegionMask& set, const RegionMask& container, double multiplier) {
  check_same_grid(set.grid, container.grid, "mean_curvature_bounds_check");
  require(is_subset(set, container), "mean_curvature_bounds_check: set must lie in the container");
  const Grid& g = *set.grid;
  const int n = g.dim();
  const double h = g.spacing();
  CurvatureReport rep;
  rep.multiplier = multiplier;
  const RegionMask clear = erode(container, 3);
  if (erode(set, 2).empty() || clear.empty()) {
    throw InvalidArgument("mean_curvature_bounds_check: boundary too thin to estimate curvature (< 3 cells of clearance)");
  }
  const ScalarField u = gaussian_smooth(set.indicator(), 2.0);
  const auto& st = g.strides();
  auto grad = [&](std::size_t i, double* gr) {
    double s = 0.0;
    for (int b = 0; b < n; ++b) {
      gr[b] = (u[i + st[b]] - u[i - st[b]]) / (2.0 * h);
      s += gr[b] * gr[b];
    }
    return std::sqrt(s);
  };
  auto normal = [&](std::size_t i, int a) {
    double gr[3];
    const double s = grad(i, gr);
    return s > 0.0 ? gr[a] / s : 0.0;
  };
  // Band of the smoothed indicator around its half level, away from the walls.
  std::vector<double> kappa, weight;
  std::vector<Index3> pos;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!clear.cells[i] || std::abs(u[i] - 0.5) >= 0.25) continue;
    double gr[3];
    const double gn = grad(i, gr);
    if (gn <= 0.0) continue;
    double div = 0.0;
    for (int a = 0; a < n; ++a) div += (normal(i + st[a], a) - normal(i - st[a], a)) / (2.0 * h);
    kappa.push_back(-div);
    weight.push_back(gn);
    pos.push_back(g.coords(i));
  }
  if (kappa.empty()) {
    rep.empty_free_boundary = true;
    rep.constant_ok = true;
    rep.note = "empty free boundary";
    return rep;
  }
  double wsum = 0.0, ksum = 0.0;
  for (std::size_t k = 0; k < kappa.size(); ++k) {
    wsum += weight[k];
    ksum += weight[k] * kappa[k];
  }
  rep.mean = ksum / wsum;
  // Staircase noise in the raw samples is O(1/h) in absolute terms; average each
  // sample over a window that grows with the radius of curvature.
  const double rc = rep.mean != 0.0 ? (n - 1) / std::abs(rep.mean) / h : 0.0;
  const double win = std::clamp(0.25 * rc, 3.0, 20.0);
  const int bs = static_cast<int>(std::ceil(win));
  std::map<Index3, std::vector<std::size_t>> bins;
  auto bin_of = [&](const Index3& c) { return Index3{c[0] / bs, c[1] / bs, c[2] / bs}; };
  for (std::size_t k = 0; k < kappa.size(); ++k) bins[bin_of(pos[k])].push_back(k);
  std::vector<double> local(kappa.size());
  for (std::size_t k = 0; k < kappa.size(); ++k) {
    const Index3 b0 = bin_of(pos[k]);
    double a = 0.0, b = 0.0;
    for (int di = -1; di <= 1; ++di)
      for (int dj = -1; dj <= 1; ++dj)
        for (int dk = (n > 2 ? -1 : 0); dk <= (n > 2 ? 1 : 0); ++dk) {
          auto it = bins.find(Index3{b0[0] + di, b0[1] + dj, b0[2] + dk});
          if (it == bins.end()) continue;
          for (auto m : it->second) {
            double d2 = 0.0;
            for (int ax = 0; ax < n; ++ax) {
              const double dx = double(pos[k][ax] - pos[m][ax]);
              d2 += dx * dx;
            }
            if (d2 <= win * win) {
              a += weight[m] * kappa[m];
              b += weight[m];
            }
          }
        }
    local[k] = a / b;
  }
  double var = 0.0;
  for (std::size_t k = 0; k < kappa.size(); ++k) var += weight[k] * (local[k] - rep.mean) * (local[k] - rep.mean);
  const double sd = std::sqrt(var / wsum);
  rep.samples = kappa.size();
  rep.spread = rep.mean != 0.0 ? sd / std::abs(rep.mean) : kInf;
  rep.constant_ok = rep.spread <= 0.15;
  if (multiplier != 0.0) {
    rep.note = "multiplier " + format_double(multiplier) + " vs free-boundary mean " + format_double(rep.mean) +
               (multiplier >= rep.mean ? " (multiplier >= mean)" : " (multiplier < mean)");
  }
  return rep;
}

}  // namespace hullcap
