#include "hullcap/tv_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hullcap/detail/padded.hpp"
#include "hullcap/errors.hpp"

namespace hullcap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Workspace {
  const Grid& g;
  detail::Padded pad;
  int n;
  std::vector<std::size_t> cells;        // padded index of each interior cell
  std::vector<std::size_t> grad_cells;   // padded cells carrying at least one active component
  std::vector<std::uint8_t> active;      // per padded cell, bit a = component a active
  std::vector<double> w;                 // face weight per padded cell
  std::vector<double> lo, hi, alpha, data, lin;  // per interior cell

  Workspace(const TvProblem& pb) : g(*pb.grid), pad(*pb.grid, 1), n(pb.grid->dim()) {
    const std::size_t N = g.size();
    cells.resize(N);
    for (std::size_t idx = 0; idx < N; ++idx) cells[idx] = pad.from_grid(g, idx);
    std::vector<std::uint8_t> inside(pad.size, 0);
    for (auto c : cells) inside[c] = 1;
    active.assign(pad.size, 0);
    pad.for_each_gradient_cell([&](std::size_t c, int, int, int) {
      std::uint8_t bits = 0;
      for (int a = 0; a < n; ++a) {
        const bool in0 = inside[c] != 0;
        const bool in1 = inside[c + pad.st[a]] != 0;
        const bool on = pb.boundary == TvBoundary::kZeroGhost ? (in0 || in1) : (in0 && in1);
        if (on) bits |= static_cast<std::uint8_t>(1u << a);
      }
      active[c] = bits;
      if (bits) grad_cells.push_back(c);
    });
    w = pad.face_weights(g);
    lo = pb.lower;
    hi = pb.upper;
    alpha = pb.fidelity.empty() ? std::vector<double>(N, 0.0) : pb.fidelity;
    data = pb.data.empty() ? std::vector<double>(N, 0.0) : pb.data;
    lin = pb.linear.empty() ? std::vector<double>(N, 0.0) : pb.linear;
  }

  double tv(const std::vector<double>& u) const {
    double total = 0.0;
    for (auto c : grad_cells) {
      double s = 0.0;
      for (int a = 0; a < n; ++a) {
        if (active[c] & (1u << a)) {
          const double d = u[c + pad.st[a]] - u[c];
          s += d * d;
        }
      }
      total += w[c] * std::sqrt(s);
    }
    return total;
  }

  double primal(const std::vector<double>& u) const {
    double e = tv(u);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const double x = u[cells[i]];
      e += 0.5 * alpha[i] * (x - data[i]) * (x - data[i]) - lin[i] * x;
    }
    return e;
  }
};

void validate(const TvProblem& pb) {
  require(pb.grid != nullptr, "tv problem needs a grid");
  const std::size_t N = pb.grid->size();
  require(pb.lower.size() == N && pb.upper.size() == N, "tv problem bounds do not match the grid");
  require(pb.fidelity.empty() || pb.fidelity.size() == N, "tv fidelity weights do not match the grid");
  require(pb.data.empty() || pb.data.size() == N, "tv data does not match the grid");
  require(pb.linear.empty() || pb.linear.size() == N, "tv linear term does not match the grid");
  for (std::size_t i = 0; i < N; ++i) {
    require(pb.lower[i] <= pb.upper[i], "tv problem has lower bound above upper bound");
    const bool has_alpha = !pb.fidelity.empty() && pb.fidelity[i] > 0.0;
    require(has_alpha || (std::isfinite(pb.lower[i]) && std::isfinite(pb.upper[i])),
            "tv problem needs finite bounds where there is no fidelity term");
  }
}

// Restriction by 2x pooling: bounds by max, linear term by sum.
bool coarsen(const TvProblem& pb, TvProblem& coarse) {
  const Grid& g = *pb.grid;
  if (!pb.fidelity.empty()) return false;
  for (int a = 0; a < g.dim(); ++a) {
    if (g.extent(a) % 2 != 0 || g.extent(a) < 64) return false;
  }
  if (g.conformal()) return false;
  std::vector<int> dims;
  std::vector<double> origin;
  for (int a = 0; a < g.dim(); ++a) {
    dims.push_back(g.extent(a) / 2);
    origin.push_back(g.origin()[a]);
  }
  coarse.grid = make_grid(dims, 2.0 * g.spacing(), origin);
  coarse.boundary = pb.boundary;
  const Grid& cg = *coarse.grid;
  coarse.lower.assign(cg.size(), -kInf);
  coarse.upper.assign(cg.size(), -kInf);
  if (!pb.linear.empty()) coarse.linear.assign(cg.size(), 0.0);
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    const Index3 c = g.coords(idx);
    const std::size_t ci = cg.index(c[0] / 2, c[1] / 2, g.dim() > 2 ? c[2] / 2 : 0);
    coarse.lower[ci] = std::max(coarse.lower[ci], pb.lower[idx]);
    coarse.upper[ci] = std::max(coarse.upper[ci], pb.upper[idx]);
    if (!pb.linear.empty()) coarse.linear[ci] += pb.linear[idx];
  }
  return true;
}

std::vector<double> prolong(const TvProblem& fine, const TvProblem& coarse, const std::vector<double>& uc) {
  const Grid& g = *fine.grid;
  const Grid& cg = *coarse.grid;
  std::vector<double> u(g.size());
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    const Index3 c = g.coords(idx);
    const double v = uc[cg.index(c[0] / 2, c[1] / 2, g.dim() > 2 ? c[2] / 2 : 0)];
    u[idx] = std::clamp(v, fine.lower[idx], fine.upper[idx]);
  }
  return u;
}

}  // namespace

double tv_objective(const TvProblem& problem, const std::vector<double>& u) {
  validate(problem);
  Workspace ws(problem);
  return ws.primal(ws.pad.embed(ws.g, u));
}

TvSolution solve_tv(const TvProblem& pb, const TvParams& params, const TvSolution* warm) {
  validate(pb);
  require(params.gap_tol > 0.0, "tv solver gap tolerance must be positive");
  require(params.max_iters > 0 && params.check_every > 0, "tv solver iteration limits must be positive");
  require(params.step_ratio > 0.0, "tv solver step ratio must be positive");

  std::vector<double> start;
  if (warm) {
    require(warm->u.size() == pb.grid->size(), "tv warm start does not match the grid");
    start = warm->u;
  } else {
    TvProblem coarse;
    if (params.multilevel && coarsen(pb, coarse)) {
      TvParams cp = params;
      cp.gap_tol = std::max(params.gap_tol, 1e-4) * 2.0;
      cp.max_iters = std::max(params.max_iters / 2, params.check_every);
      const TvSolution cs = solve_tv(coarse, cp);
      start = prolong(pb, coarse, cs.u);
    }
  }

  Workspace ws(pb);
  const Grid& g = ws.g;
  const int n = ws.n;
  const std::size_t N = g.size();
  const auto& st = ws.pad.st;

  std::vector<double> u(ws.pad.size, 0.0);
  for (std::size_t i = 0; i < N; ++i) {
    double x0 = start.empty() ? (std::isfinite(ws.lo[i]) ? ws.lo[i] : ws.data[i]) : start[i];
    u[ws.cells[i]] = std::clamp(x0, ws.lo[i], ws.hi[i]);
  }
  std::vector<double> ubar = u;
  std::vector<std::vector<double>> p(n, std::vector<double>(ws.pad.size, 0.0));
  if (warm && warm->dual.size() == static_cast<std::size_t>(n) * ws.pad.size) {
    for (int a = 0; a < n; ++a) {
      std::copy_n(warm->dual.begin() + static_cast<std::ptrdiff_t>(a * ws.pad.size), ws.pad.size, p[a].begin());
    }
  }

  double wref = 0.0;
  for (auto c : ws.grad_cells) wref = std::max(wref, ws.w[c]);
  if (wref == 0.0) wref = 1.0;
  const double L = 2.0 * std::sqrt(static_cast<double>(n));
  double tau = params.step_ratio / (L * wref);
  double sigma = wref / (L * params.step_ratio);
  // Strong convexity modulus of the data term for the accelerated variant.
  double gamma = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < N; ++i) {
    if (ws.lo[i] < ws.hi[i]) gamma = std::min(gamma, ws.alpha[i]);
  }
  const bool accelerate = gamma > 0.0 && std::isfinite(gamma);

  TvSolution sol;
  sol.report.solver = "primal-dual TV";
  double q[3];
  int it = 0;
  for (it = 1; it <= params.max_iters; ++it) {
    // Dual ascent and projection onto |p_c| <= w_c.
    for (auto c : ws.grad_cells) {
      const std::uint8_t bits = ws.active[c];
      double s = 0.0;
      for (int a = 0; a < n; ++a) {
        if (bits & (1u << a)) {
          q[a] = p[a][c] + sigma * (ubar[c + st[a]] - ubar[c]);
          s += q[a] * q[a];
        }
      }
      const double wc = ws.w[c];
      const double scale = s > wc * wc ? wc / std::sqrt(s) : 1.0;
      for (int a = 0; a < n; ++a) {
        if (bits & (1u << a)) p[a][c] = q[a] * scale;
      }
    }
    // Primal descent with the proximal map of the pointwise terms.
    double theta = 1.0;
    for (std::size_t i = 0; i < N; ++i) {
      const std::size_t c = ws.cells[i];
      double ktp = 0.0;
      for (int a = 0; a < n; ++a) ktp += p[a][c - st[a]] - p[a][c];
      const double v = u[c] - tau * ktp;
      const double x = (v / tau + ws.alpha[i] * ws.data[i] + ws.lin[i]) / (1.0 / tau + ws.alpha[i]);
      const double xn = std::clamp(x, ws.lo[i], ws.hi[i]);
      ubar[c] = xn;  // temporarily holds the new iterate
    }
    if (accelerate) {
      theta = 1.0 / std::sqrt(1.0 + 2.0 * gamma * tau);
      tau *= theta;
      sigma /= theta;
    }
    for (std::size_t i = 0; i < N; ++i) {
      const std::size_t c = ws.cells[i];
      const double xn = ubar[c];
      ubar[c] = xn + theta * (xn - u[c]);
      u[c] = xn;
    }

    if (it % params.check_every == 0 || it == params.max_iters) {
      const double primal = ws.primal(u);
      double dual = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        const std::size_t c = ws.cells[i];
        double ktp = 0.0;
        for (int a = 0; a < n; ++a) ktp += p[a][c - st[a]] - p[a][c];
        const double qv = ktp - ws.lin[i];
        const double al = ws.alpha[i];
        double x;
        if (al > 0.0) {
          x = std::clamp(ws.data[i] - qv / al, ws.lo[i], ws.hi[i]);
        } else {
          x = qv >= 0.0 ? ws.lo[i] : ws.hi[i];
        }
        dual += qv * x + 0.5 * al * (x - ws.data[i]) * (x - ws.data[i]);
      }
      const double rel = (primal - dual) / std::max(std::abs(primal), 1e-300);
      sol.history.push_back(primal);
      sol.report.objective = primal;
      sol.report.dual_objective = dual;
      sol.report.gap = rel;
      if (rel <= params.gap_tol) {
        sol.report.converged = true;
        break;
      }
    }
  }
  sol.report.iterations = std::min(it, params.max_iters);
  if (!sol.report.converged) {
    sol.report.notes.push_back("primal-dual gap " + std::to_string(sol.report.gap) + " above tolerance after " +
                               std::to_string(params.max_iters) + " iterations");
  }
  sol.u = ws.pad.extract(g, u);
  sol.dual.reserve(static_cast<std::size_t>(n) * ws.pad.size);
  for (int a = 0; a < n; ++a) sol.dual.insert(sol.dual.end(), p[a].begin(), p[a].end());
  return sol;
}

}  // namespace hullcap
