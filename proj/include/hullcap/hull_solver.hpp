#pragma once

#include "hullcap/grid.hpp"
#include "hullcap/study.hpp"
#include "hullcap/tv_engine.hpp"

namespace hullcap {

/// Least-area problem with obstacle on a bounded box.
struct ObstacleProblem {
  GridPtr grid;
  RegionMask obstacle;
  /// Minimum number of empty cell layers between the obstacle and the grid boundary.
  int box_padding = 8;
  TvParams solver{.max_iters = 20000, .gap_tol = 1e-3};
};

struct RelaxedHull {
  ScalarField relaxed;
  SolveReport report;
};

struct HullResult {
  ScalarField relaxed;
  RegionMask hull;
  double hull_perimeter = 0.0;
  double hull_volume = 0.0;
  /// Relaxed TV objective, the discrete stand-in for Cap_1.
  double cap1_estimate = 0.0;
  SolveReport report;
};

/// Minimises the relaxed perimeter over chi_obstacle <= u <= 1.
///
/// Throws DomainTooSmall when the obstacle violates the padding band or the
/// minimiser reaches the last cell layer of the box.
RelaxedHull solve_tv_obstacle(const ObstacleProblem& problem);

/// hull = interior({u > threshold}) united with the obstacle, or the obstacle
/// itself when that set is not strictly shorter.
///
/// Perimeter uses the mollified estimator. `report` is copied through when
/// the relaxed field comes from solve_tv_obstacle.
HullResult extract_hull(const ScalarField& relaxed, const RegionMask& obstacle, double threshold = 0.5,
                        int window = 1);

/// solve_tv_obstacle followed by extract_hull.
HullResult compute_hull(const ObstacleProblem& problem, double threshold = 0.5);

struct OutwardVerdict {
  bool verdict = false;
  /// (P(mask) - P(hull)) / P(mask).
  double gap = 0.0;
  double perimeter = 0.0;
  double hull_perimeter = 0.0;
  SolveReport report;
};

OutwardVerdict is_outward_minimising(const RegionMask& mask, double tol, const TvParams& solver = {.gap_tol = 1e-3},
                                     int box_padding = 8);

}  // namespace hullcap
