#pragma once

#include <string>
#include <vector>

#include "hullcap/grid.hpp"
#include "hullcap/study.hpp"

namespace hullcap {

struct PLaplaceConfig {
  double p = 1.5;
  /// Gradient regularisation, strictly decreasing.
  std::vector<double> epsilon_schedule{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  /// Truncation radii R_k about `center`, strictly increasing.
  std::vector<double> radii_schedule{1.0};
  /// Relative energy change that ends the lagged-diffusivity loop at fixed epsilon.
  double inner_tol = 1e-7;
  /// Lagged-diffusivity steps allowed per epsilon.
  int max_outer = 60;
  int cg_max_iters = 20000;
  Point3 center{0.0, 0.0, 0.0};
  /// The grid is one 2^n-th of a problem that is mirror symmetric about the
  /// coordinate planes through `center`, which must be the grid's lower corner.
  /// No-flux faces there; reported capacities are multiplied by 2^n.
  bool mirror = false;
  /// Warm start each radius from a 2x coarser grid (full epsilon schedule
  /// there, final epsilon only on the fine grid).
  bool multilevel = true;
};

struct PotentialResult {
  ScalarField potential;
  double capacity = 0.0;
  /// Columns: R, capacity, outer_iterations, cg_iterations.
  StudyTable per_radius;
  /// Columns: R, eps, step, energy (regularised, after each lagged step).
  StudyTable trace;
  SolveReport report;
};

/// Potential of `obstacle` relative to the balls B(center, R_k), by
/// lagged diffusivity on the regularised p-Dirichlet energy with epsilon continuation.
PotentialResult solve_potential(const GridPtr& grid, const RegionMask& obstacle, const PLaplaceConfig& cfg);

/// Discrete p-Dirichlet energy sum_c phi^n h^n |D u|_c^p with the solver's forward stencil.
double capacity(const ScalarField& potential, double p, double symmetry_factor = 1.0);

/// Regularised energy sum_c phi^n h^n (|D u|_c^2 + eps^2)^(p/2).
double regularised_energy(const ScalarField& potential, double p, double eps);

struct ImcfEstimate {
  /// w = -(p - 1) log(max(u, floor)).
  ScalarField w;
  /// interior({u >= 1/2}); empty when flagged.
  RegionMask hull;
  bool flagged = false;
  std::string note;
};

ImcfEstimate imcf_from_potential(const ScalarField& potential, double p, double floor = 1e-12);

struct JValues {
  double Jw = 0.0;
  double Jv = 0.0;
};

/// J_w(v) = int_K |Dv| + v |Dw| and J_w(w) over the window K.
///
/// Rejects v whose difference from w is not supported at least one cell
/// inside K, and windows meeting the closure of {w < 0}.
JValues imcf_functional(const ScalarField& w, const ScalarField& v, const RegionMask& window);

struct LevelSetResidual {
  /// phi^-n div(phi^(n-1) Dw / |Dw|) - |Dw| / phi, centred differences.
  ScalarField residual;
  /// Cells where the residual was evaluated.
  RegionMask valid;
  /// Max and volume-weighted L1 mean of |residual| over valid cells.
  double max_abs = 0.0;
  double mean_abs = 0.0;
};

LevelSetResidual level_set_residual(const ScalarField& w, double grad_threshold = 1e-8,
                                    const RegionMask* region = nullptr);

}  // namespace hullcap
