#include "hullcap/p_laplace.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "hullcap/errors.hpp"
#include "hullcap/field_core.hpp"

namespace hullcap {

namespace {

// Squared forward-difference gradient |Du|_c^2 in the metric (Neumann at the grid edge).
double grad_sq(const Grid& g, const std::vector<double>& u, std::size_t c, const Index3& x) {
  const int n = g.dim();
  const auto& st = g.strides();
  double s = 0.0;
  for (int a = 0; a < n; ++a) {
    if (x[a] + 1 < g.extent(a)) {
      const double d = u[c + st[a]] - u[c];
      s += d * d;
    }
  }
  const double hp = g.spacing() * g.phi(c);
  return s / (hp * hp);
}

double energy_sum(const Grid& g, const std::vector<double>& u, double p, double eps) {
  double e = 0.0;
  for (std::size_t c = 0; c < g.size(); ++c) {
    const double s = grad_sq(g, u, c, g.coords(c));
    if (eps == 0.0) {
      if (s > 0.0) e += g.cell_volume(c) * std::pow(s, 0.5 * p);
    } else {
      e += g.cell_volume(c) * std::pow(s + eps * eps, 0.5 * p);
    }
  }
  return e;
}

// Symmetric positive operator (A d)_i = sum_a k_i (d_i - d_{i+a}) + k_{i-a} (d_i - d_{i-a}).
struct Operator {
  const Grid& g;
  std::vector<Index3> coords;
  std::vector<double> k;

  explicit Operator(const Grid& grid) : g(grid), coords(grid.size()), k(grid.size(), 0.0) {
    for (std::size_t c = 0; c < g.size(); ++c) coords[c] = g.coords(c);
  }

  double apply_at(const std::vector<double>& d, std::size_t i) const {
    const auto& st = g.strides();
    const Index3& x = coords[i];
    double acc = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
      if (x[a] + 1 < g.extent(a)) acc += k[i] * (d[i] - d[i + st[a]]);
      if (x[a] > 0) acc += k[i - st[a]] * (d[i] - d[i - st[a]]);
    }
    return acc;
  }

  double diag_at(std::size_t i) const {
    const auto& st = g.strides();
    const Index3& x = coords[i];
    double acc = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
      if (x[a] + 1 < g.extent(a)) acc += k[i];
      if (x[a] > 0) acc += k[i - st[a]];
    }
    return acc;
  }
};

struct CgResult {
  int iterations = 0;
  bool converged = false;
};

// Jacobi-preconditioned CG on the free cells; fixed entries of x stay put.
CgResult solve_free(const Operator& A, const std::vector<std::size_t>& free, std::vector<double>& x, double rtol,
                    int max_iters) {
  const std::size_t m = free.size();
  std::vector<double> r(m), z(m), diag(m), q(m);
  std::vector<double> d(x.size(), 0.0);
  // Right-hand side norm: residual with the free entries zeroed.
  std::vector<double> x0 = x;
  for (auto i : free) x0[i] = 0.0;
  double bnorm = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double b = -A.apply_at(x0, free[j]);
    bnorm += b * b;
  }
  bnorm = std::sqrt(bnorm);
  CgResult res;
  if (bnorm == 0.0) {
    for (auto i : free) x[i] = 0.0;
    res.converged = true;
    return res;
  }
  double rz = 0.0, rr = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    r[j] = -A.apply_at(x, free[j]);
    diag[j] = A.diag_at(free[j]);
    z[j] = r[j] / diag[j];
    d[free[j]] = z[j];
    rz += r[j] * z[j];
    rr += r[j] * r[j];
  }
  const double target = rtol * bnorm;
  for (int it = 0; it < max_iters; ++it) {
    if (std::sqrt(rr) <= target) {
      res.converged = true;
      res.iterations = it;
      return res;
    }
    double dq = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      q[j] = A.apply_at(d, free[j]);
      dq += d[free[j]] * q[j];
    }
    if (dq <= 0.0) break;
    const double alpha = rz / dq;
    double rz_new = 0.0;
    rr = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      x[free[j]] += alpha * d[free[j]];
      r[j] -= alpha * q[j];
      z[j] = r[j] / diag[j];
      rz_new += r[j] * z[j];
      rr += r[j] * r[j];
    }
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t j = 0; j < m; ++j) d[free[j]] = z[j] + beta * d[free[j]];
    res.iterations = it + 1;
  }
  res.converged = std::sqrt(rr) <= target;
  return res;
}

double dist_to(const Grid& g, std::size_t idx, const Point3& c) {
  const Point3 x = g.center(idx);
  double s = 0.0;
  for (int a = 0; a < g.dim(); ++a) s += (x[a] - c[a]) * (x[a] - c[a]);
  return std::sqrt(s);
}

void validate(const GridPtr& grid, const RegionMask& obstacle, const PLaplaceConfig& cfg) {
  require(grid != nullptr, "solve_potential needs a grid");
  check_same_grid(grid, obstacle.grid, "solve_potential");
  require(!obstacle.empty(), "solve_potential: obstacle is empty");
  require(cfg.p > 1.0 && std::isfinite(cfg.p), "solve_potential: p must exceed 1");
  require(!cfg.epsilon_schedule.empty() && !cfg.radii_schedule.empty(), "solve_potential: schedules must be nonempty");
  for (std::size_t i = 0; i < cfg.epsilon_schedule.size(); ++i) {
    require(cfg.epsilon_schedule[i] > 0.0, "solve_potential: epsilon values must be positive");
    require(i == 0 || cfg.epsilon_schedule[i] < cfg.epsilon_schedule[i - 1],
            "solve_potential: epsilon schedule must be strictly decreasing");
  }
  for (std::size_t i = 0; i < cfg.radii_schedule.size(); ++i) {
    require(cfg.radii_schedule[i] > 0.0, "solve_potential: radii must be positive");
    require(i == 0 || cfg.radii_schedule[i] > cfg.radii_schedule[i - 1],
            "solve_potential: radii schedule must be strictly increasing");
  }
  require(cfg.inner_tol > 0.0 && cfg.max_outer > 0 && cfg.cg_max_iters > 0,
          "solve_potential: tolerances and iteration limits must be positive");
  const Grid& g = *grid;
  const double h = g.spacing();
  const double Rmax = cfg.radii_schedule.back();
  for (int a = 0; a < g.dim(); ++a) {
    const double lo = g.origin()[a];
    const double hi = lo + g.extent(a) * h;
    if (cfg.mirror) {
      require(std::abs(cfg.center[a] - lo) <= 1e-12 * std::max(1.0, std::abs(lo)),
              "solve_potential: mirror mode needs the centre at the grid's lower corner");
    } else {
      require(cfg.center[a] - Rmax >= lo + h, "solve_potential: largest ball leaves the grid");
    }
    require(cfg.center[a] + Rmax <= hi - h, "solve_potential: largest ball leaves the grid");
  }
  const double R0 = cfg.radii_schedule.front();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (obstacle.cells[i] && dist_to(g, i, cfg.center) >= R0 - h) {
      throw InvalidArgument("solve_potential: obstacle meets the truncation sphere of radius " + format_double(R0));
    }
  }
}

}  // namespace

double capacity(const ScalarField& potential, double p, double symmetry_factor) {
  require(p > 1.0, "capacity: p must exceed 1");
  return symmetry_factor * energy_sum(*potential.grid, potential.values, p, 0.0);
}

double regularised_energy(const ScalarField& potential, double p, double eps) {
  require(p > 1.0 && eps >= 0.0, "regularised_energy: need p > 1 and eps >= 0");
  return energy_sum(*potential.grid, potential.values, p, eps);
}

namespace {

struct LevelStats {
  int outer = 0;
  long cg = 0;
};

RegionMask restrict_mask(const RegionMask& fine, const GridPtr& coarse) {
  const Grid& g = *fine.grid;
  const Grid& cg = *coarse;
  std::vector<int> votes(cg.size(), 0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!fine.cells[i]) continue;
    const Index3 c = g.coords(i);
    ++votes[cg.index(c[0] / 2, c[1] / 2, g.dim() > 2 ? c[2] / 2 : 0)];
  }
  const int half = g.dim() == 2 ? 2 : 4;
  RegionMask out(coarse);
  for (std::size_t i = 0; i < cg.size(); ++i) out.cells[i] = votes[i] >= half ? 1 : 0;
  return out;
}

GridPtr coarsen_grid(const Grid& g) {
  std::vector<int> dims;
  std::vector<double> origin;
  for (int a = 0; a < g.dim(); ++a) {
    if (g.extent(a) % 2 != 0 || g.extent(a) < 32) return nullptr;
    dims.push_back(g.extent(a) / 2);
    origin.push_back(g.origin()[a]);
  }
  auto cgrid = make_grid(dims, 2.0 * g.spacing(), origin);
  if (!g.conformal()) return cgrid;
  std::vector<double> phi(cgrid->size(), 0.0);
  const double share = g.dim() == 2 ? 0.25 : 0.125;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Index3 c = g.coords(i);
    phi[cgrid->index(c[0] / 2, c[1] / 2, g.dim() > 2 ? c[2] / 2 : 0)] += share * g.phi(i);
  }
  return cgrid->with_conformal_factor(std::move(phi));
}

bool coarse_admissible(const Grid& cg, const RegionMask& cob, const PLaplaceConfig& cfg, double R) {
  if (cob.empty()) return false;
  const double h = cg.spacing();
  for (int a = 0; a < cg.dim(); ++a) {
    const double lo = cg.origin()[a];
    const double hi = lo + cg.extent(a) * h;
    if (!cfg.mirror && cfg.center[a] - R < lo + h) return false;
    if (cfg.center[a] + R > hi - h) return false;
  }
  for (std::size_t i = 0; i < cg.size(); ++i) {
    if (cob.cells[i] && dist_to(cg, i, cfg.center) >= R - h) return false;
  }
  return true;
}

// Cell-centred multilinear interpolation from a 2x coarser grid.
void prolong_linear(const Grid& cg, const std::vector<double>& uc, const Grid& g, std::vector<double>& u) {
  const int n = g.dim();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Index3 c = g.coords(i);
    Index3 base{0, 0, 0};
    std::array<int, 3> nb{0, 0, 0};
    for (int a = 0; a < n; ++a) {
      base[a] = c[a] / 2;
      // Fine cell 2m sits a quarter cell below coarse centre m, 2m+1 a quarter above.
      const int dir = (c[a] % 2 == 0) ? -1 : 1;
      nb[a] = std::clamp(base[a] + dir, 0, cg.extent(a) - 1);
    }
    double acc = 0.0;
    for (int corner = 0; corner < (1 << n); ++corner) {
      Index3 q = base;
      double wgt = 1.0;
      for (int a = 0; a < n; ++a) {
        if (corner & (1 << a)) {
          q[a] = nb[a];
          wgt *= 0.25;
        } else {
          wgt *= 0.75;
        }
      }
      acc += wgt * uc[cg.index(q[0], q[1], q[2])];
    }
    u[i] = acc;
  }
}

// Lagged diffusivity over an epsilon list for one truncation radius; u is updated in place.
LevelStats kacanov(const GridPtr& grid, const RegionMask& obstacle, const PLaplaceConfig& cfg, double R,
                   const std::vector<double>& eps_list, std::vector<double>& u, PotentialResult* log) {
  const Grid& g = *grid;
  const double p = cfg.p;
  LevelStats stats;

  std::vector<std::size_t> free;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const bool inside = dist_to(g, i, cfg.center) < R;
    if (obstacle.cells[i]) {
      u[i] = 1.0;
    } else if (!inside) {
      u[i] = 0.0;
    } else {
      free.push_back(i);
    }
  }

  Operator A(g);
  for (std::size_t stage = 0; stage < eps_list.size(); ++stage) {
    const double eps = eps_list[stage];
    const bool last = stage + 1 == eps_list.size();
    const double stage_tol = last ? cfg.inner_tol : std::max(cfg.inner_tol, 1e-4);
    double e_old = energy_sum(g, u, p, eps);
    double last_rel = 1.0;
    bool settled = false;
    for (int step = 1; step <= cfg.max_outer; ++step) {
      for (std::size_t c = 0; c < g.size(); ++c) {
        const double s = grad_sq(g, u, c, A.coords[c]);
        const double hp = g.spacing() * g.phi(c);
        A.k[c] = g.cell_volume(c) * std::pow(s + eps * eps, 0.5 * (p - 2.0)) / (hp * hp);
      }
      std::vector<double> trial = u;
      // Any CG iterate started at u lowers the frozen quadratic, so inexact solves keep descent.
      const double cg_tol = std::clamp(1e-2 * std::sqrt(last_rel), 1e-10, 1e-3);
      const CgResult cg = solve_free(A, free, trial, cg_tol, cfg.cg_max_iters);
      stats.cg += cg.iterations;
      if (!cg.converged && log) {
        log->report.notes.push_back("CG did not reach tolerance at R=" + format_double(R) +
                                    " eps=" + format_double(eps));
        log->report.converged = false;
      }
      double e_new = energy_sum(g, trial, p, eps);
      // The frozen-coefficient step is a majorise-minimise step for p <= 2; damp otherwise.
      if (e_new > e_old) {
        const std::vector<double> full = trial;
        for (double t = 0.5; t >= 1.0 / 64.0 && e_new > e_old; t *= 0.5) {
          for (auto i : free) trial[i] = u[i] + t * (full[i] - u[i]);
          e_new = energy_sum(g, trial, p, eps);
        }
      }
      ++stats.outer;
      const double rel = std::abs(e_old - e_new) / std::max(e_new, 1e-300);
      if (e_new <= e_old) {
        u.swap(trial);
        e_old = e_new;
      }
      if (log) {
        log->trace.add_row({R, eps, static_cast<double>(step), e_old});
        log->report.residual = rel;
      }
      last_rel = std::max(rel, 1e-16);
      if (rel < stage_tol) {
        settled = true;
        break;
      }
    }
    if (!settled && log) {
      log->report.converged = false;
      log->report.notes.push_back("lagged diffusivity did not settle at R=" + format_double(R) +
                                  " eps=" + format_double(eps));
    }
  }
  return stats;
}

// Solve at radius R, warm-started from a 2x coarser grid when possible.
LevelStats solve_radius(const GridPtr& grid, const RegionMask& obstacle, const PLaplaceConfig& cfg, double R,
                        std::vector<double>& u, PotentialResult* log, bool have_start) {
  const Grid& g = *grid;
  std::vector<double> eps_list = cfg.epsilon_schedule;
  if (cfg.multilevel && !have_start) {
    if (GridPtr cgrid = coarsen_grid(g)) {
      RegionMask cob = restrict_mask(obstacle, cgrid);
      if (coarse_admissible(*cgrid, cob, cfg, R)) {
        std::vector<double> uc(cgrid->size(), 0.0);
        for (std::size_t i = 0; i < uc.size(); ++i) uc[i] = cob.cells[i] ? 1.0 : 0.0;
        const LevelStats cs = solve_radius(cgrid, cob, cfg, R, uc, nullptr, false);
        prolong_linear(*cgrid, uc, g, u);
        eps_list.assign(1, cfg.epsilon_schedule.back());
        LevelStats fs = kacanov(grid, obstacle, cfg, R, eps_list, u, log);
        fs.cg += cs.cg;
        return fs;
      }
    }
  }
  if (have_start) eps_list.assign(1, cfg.epsilon_schedule.back());
  return kacanov(grid, obstacle, cfg, R, eps_list, u, log);
}

}  // namespace

PotentialResult solve_potential(const GridPtr& grid, const RegionMask& obstacle, const PLaplaceConfig& cfg) {
  validate(grid, obstacle, cfg);
  const Grid& g = *grid;
  const double sym = cfg.mirror ? std::pow(2.0, g.dim()) : 1.0;

  PotentialResult res;
  res.report.solver = "lagged diffusivity + CG";
  res.report.converged = true;
  res.per_radius = StudyTable({"R", "capacity", "outer_iterations", "cg_iterations"});
  res.per_radius.metadata["p"] = format_double(cfg.p);
  res.trace = StudyTable({"R", "eps", "step", "energy"});

  std::vector<double> u(g.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) u[i] = obstacle.cells[i] ? 1.0 : 0.0;
  int total_outer = 0;
  bool have_start = false;
  for (double R : cfg.radii_schedule) {
    // Larger radii start from the previous potential (extended by zero).
    const LevelStats st = solve_radius(grid, obstacle, cfg, R, u, &res, have_start);
    have_start = true;
    total_outer += st.outer;
    const double cap = sym * energy_sum(g, u, cfg.p, 0.0);
    res.per_radius.add_row({R, cap, static_cast<double>(st.outer), static_cast<double>(st.cg)});
    res.capacity = cap;
  }
  for (auto& v : u) v = std::clamp(v, 0.0, 1.0);
  res.potential = ScalarField(grid, std::move(u));
  res.report.iterations = total_outer;
  res.report.objective = res.capacity;
  return res;
}

ImcfEstimate imcf_from_potential(const ScalarField& potential, double p, double floor) {
  require(p > 1.0, "imcf_from_potential: p must exceed 1");
  require(floor > 0.0 && floor < 1.0, "imcf_from_potential: floor must lie in (0, 1)");
  ImcfEstimate out;
  out.w = ScalarField(potential.grid);
  RegionMask level(potential.grid);
  RegionMask top(potential.grid);
  double umax = 0.0;
  for (std::size_t i = 0; i < potential.size(); ++i) {
    const double u = potential.values[i];
    require(std::isfinite(u), "imcf_from_potential: non-finite potential");
    umax = std::max(umax, u);
    out.w.values[i] = -(p - 1.0) * std::log(std::max(u, floor));
    level.cells[i] = u >= 0.5 ? 1 : 0;
    top.cells[i] = u >= 1.0 ? 1 : 0;
  }
  if (umax < 0.5) {
    out.flagged = true;
    out.note = "potential identically small: p-parabolic symptom, no hull emitted";
    out.hull = RegionMask(potential.grid);
    return out;
  }
  out.hull = mask_union(measure_theoretic_interior(level), top);
  return out;
}

JValues imcf_functional(const ScalarField& w, const ScalarField& v, const RegionMask& window) {
  check_same_grid(w.grid, v.grid, "imcf_functional");
  check_same_grid(w.grid, window.grid, "imcf_functional");
  check_finite(w, "imcf_functional");
  check_finite(v, "imcf_functional");
  require(!window.empty(), "imcf_functional: empty window");
  const Grid& g = *w.grid;
  const RegionMask core = erode(window, 1);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (w.values[i] != v.values[i] && !core.cells[i]) {
      throw InvalidArgument("imcf_functional: v differs from w outside the window core (support leaks)");
    }
  }
  RegionMask sub(w.grid);
  for (std::size_t i = 0; i < g.size(); ++i) sub.cells[i] = w.values[i] < 0.0 ? 1 : 0;
  const RegionMask closure = dilate(sub, 1);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (window.cells[i] && closure.cells[i]) {
      throw InvalidArgument("imcf_functional: window meets the closure of {w < 0}");
    }
  }
  JValues out;
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (!window.cells[c]) continue;
    const Index3 x = g.coords(c);
    const double vol = g.cell_volume(c);
    const double dw = std::sqrt(grad_sq(g, w.values, c, x));
    const double dv = std::sqrt(grad_sq(g, v.values, c, x));
    out.Jw += vol * (dw + w.values[c] * dw);
    out.Jv += vol * (dv + v.values[c] * dw);
  }
  return out;
}

LevelSetResidual level_set_residual(const ScalarField& w, double grad_threshold, const RegionMask* region) {
  check_finite(w, "level_set_residual");
  require(grad_threshold >= 0.0, "level_set_residual: threshold must be nonnegative");
  if (region) check_same_grid(w.grid, region->grid, "level_set_residual");
  const Grid& g = *w.grid;
  const int n = g.dim();
  const auto& st = g.strides();
  const double h = g.spacing();
  const std::size_t N = g.size();

  auto interior = [&](const Index3& x, int margin) {
    for (int a = 0; a < n; ++a) {
      if (x[a] < margin || x[a] >= g.extent(a) - margin) return false;
    }
    return true;
  };
  // phi^(n-1) Dw / |Dw| with centred differences, where defined.
  std::vector<std::array<double, 3>> nu(N, {0.0, 0.0, 0.0});
  std::vector<double> gmag(N, 0.0);
  std::vector<std::uint8_t> ok(N, 0);
  for (std::size_t c = 0; c < N; ++c) {
    const Index3 x = g.coords(c);
    if (!interior(x, 1)) continue;
    std::array<double, 3> d{0.0, 0.0, 0.0};
    double s = 0.0;
    for (int a = 0; a < n; ++a) {
      d[a] = (w.values[c + st[a]] - w.values[c - st[a]]) / (2.0 * h);
      s += d[a] * d[a];
    }
    gmag[c] = std::sqrt(s);
    if (gmag[c] <= grad_threshold || gmag[c] == 0.0) continue;
    const double scale = std::pow(g.phi(c), n - 1) / gmag[c];
    for (int a = 0; a < n; ++a) nu[c][a] = d[a] * scale;
    ok[c] = 1;
  }
  LevelSetResidual out;
  out.residual = ScalarField(w.grid);
  out.valid = RegionMask(w.grid);
  double vol_sum = 0.0;
  double abs_sum = 0.0;
  for (std::size_t c = 0; c < N; ++c) {
    const Index3 x = g.coords(c);
    if (!ok[c] || !interior(x, 2)) continue;
    if (region && !region->cells[c]) continue;
    bool all = true;
    double div = 0.0;
    for (int a = 0; a < n && all; ++a) {
      if (!ok[c + st[a]] || !ok[c - st[a]]) {
        all = false;
        break;
      }
      div += (nu[c + st[a]][a] - nu[c - st[a]][a]) / (2.0 * h);
    }
    if (!all) continue;
    const double phi = g.phi(c);
    const double r = div / std::pow(phi, n) - gmag[c] / phi;
    out.residual.values[c] = r;
    out.valid.cells[c] = 1;
    out.max_abs = std::max(out.max_abs, std::abs(r));
    vol_sum += g.cell_volume(c);
    abs_sum += g.cell_volume(c) * std::abs(r);
  }
  out.mean_abs = vol_sum > 0.0 ? abs_sum / vol_sum : 0.0;
  return out;
}

}  // namespace hullcap
