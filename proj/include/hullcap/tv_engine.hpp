#pragma once

#include <vector>

#include "hullcap/grid.hpp"
#include "hullcap/study.hpp"

namespace hullcap {

enum class TvBoundary {
  /// One zero-valued ghost layer on every side; jumps to it are charged.
  kZeroGhost,
  /// No flux through the grid boundary.
  kNeumann,
};

/// min_u  sum_c w_c |D u|_c + sum_i [ alpha_i/2 (u_i - d_i)^2 - f_i u_i ]  s.t. lo <= u <= hi
///
/// D is the forward-difference gradient and w_c = phi^(n-1) h^(n-1).
/// Empty `fidelity` / `linear` vectors mean zero. Bounds may be infinite only
/// where alpha_i > 0.
struct TvProblem {
  GridPtr grid;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> fidelity;
  std::vector<double> data;
  std::vector<double> linear;
  TvBoundary boundary = TvBoundary::kZeroGhost;
};

struct TvParams {
  int max_iters = 20000;
  /// Stop when (primal - dual) / |primal| <= gap_tol.
  double gap_tol = 1e-4;
  /// tau / sigma balance; tau * sigma * ||D||^2 = 1 always.
  double step_ratio = 1.0;
  int check_every = 50;
  /// Warm start from a 2x coarser solve when the grid allows it (no fidelity term).
  bool multilevel = true;
};

struct TvSolution {
  std::vector<double> u;
  SolveReport report;
  /// Primal objective at each gap check.
  std::vector<double> history;
  /// Dual field, one padded block per axis; reusable as a warm start on the same grid.
  std::vector<double> dual;
};

/// `warm` supplies a starting primal (and dual, if its size matches) from an earlier solve.
TvSolution solve_tv(const TvProblem& problem, const TvParams& params, const TvSolution* warm = nullptr);

/// Primal objective of the problem at u.
double tv_objective(const TvProblem& problem, const std::vector<double>& u);

}  // namespace hullcap
