#include "hullcap/hull_solver.hpp"

#include <algorithm>
#include <string>

#include "hullcap/errors.hpp"
#include "hullcap/field_core.hpp"

namespace hullcap {

namespace {

void check_obstacle(const ObstacleProblem& pb) {
  require(pb.grid != nullptr, "obstacle problem needs a grid");
  check_same_grid(pb.grid, pb.obstacle.grid, "obstacle problem");
  require(pb.box_padding >= 0, "box padding must be nonnegative");
  require(pb.solver.gap_tol > 0.0, "gap tolerance must be positive");
  require(!pb.obstacle.empty(), "obstacle is empty");
  const int clearance = boundary_clearance(pb.obstacle);
  if (clearance < pb.box_padding) {
    throw DomainTooSmall("obstacle lies within " + std::to_string(pb.box_padding) +
                         " cells of the box boundary (clearance " + std::to_string(clearance) + ")");
  }
}

}  // namespace

RelaxedHull solve_tv_obstacle(const ObstacleProblem& pb) {
  check_obstacle(pb);
  TvProblem tv;
  tv.grid = pb.grid;
  tv.boundary = TvBoundary::kZeroGhost;
  tv.lower.resize(pb.grid->size());
  tv.upper.assign(pb.grid->size(), 1.0);
  for (std::size_t i = 0; i < tv.lower.size(); ++i) tv.lower[i] = pb.obstacle.cells[i] ? 1.0 : 0.0;
  TvSolution sol = solve_tv(tv, pb.solver);
  RelaxedHull out{ScalarField(pb.grid, std::move(sol.u)), std::move(sol.report)};
  out.report.solver = "primal-dual TV obstacle";

  RegionMask reach(pb.grid);
  for (std::size_t i = 0; i < reach.size(); ++i) reach.cells[i] = out.relaxed.values[i] > 0.5 ? 1 : 0;
  if (boundary_clearance(reach) == 0) {
    throw DomainTooSmall("relaxed hull reaches the box boundary; enlarge the box");
  }
  return out;
}

HullResult extract_hull(const ScalarField& relaxed, const RegionMask& obstacle, double threshold, int window) {
  check_same_grid(relaxed.grid, obstacle.grid, "extract_hull");
  require(threshold > 0.0 && threshold < 1.0, "extract_hull: threshold must lie in (0, 1)");
  HullResult res;
  res.relaxed = relaxed;
  RegionMask level(relaxed.grid);
  double umax = 0.0;
  for (std::size_t i = 0; i < level.size(); ++i) {
    const double v = relaxed.values[i];
    require(v >= -1e-9 && v <= 1.0 + 1e-9, "extract_hull: relaxed field must lie in [0, 1]");
    umax = std::max(umax, v);
    level.cells[i] = v > threshold ? 1 : 0;
  }
  res.hull = mask_union(measure_theoretic_interior(level, window), obstacle);
  if (umax <= threshold) res.report.notes.push_back("degenerate relaxed field: no cell above threshold");
  Measure m = measure(res.hull, PerimeterEstimator::kMollified);
  // The obstacle is itself a competitor; the level set only wins if it is strictly shorter.
  const Measure mo = measure(obstacle, PerimeterEstimator::kMollified);
  if (mo.perimeter <= m.perimeter && !(res.hull == obstacle)) {
    res.hull = obstacle;
    m = mo;
    res.report.notes.push_back("obstacle no longer than the threshold set: obstacle kept as hull");
  }
  res.hull_perimeter = m.perimeter;
  res.hull_volume = m.volume;
  res.cap1_estimate = total_variation(relaxed);
  return res;
}

HullResult compute_hull(const ObstacleProblem& problem, double threshold) {
  RelaxedHull rel = solve_tv_obstacle(problem);
  HullResult res = extract_hull(rel.relaxed, problem.obstacle, threshold);
  auto notes = std::move(res.report.notes);
  res.report = std::move(rel.report);
  res.report.notes.insert(res.report.notes.end(), notes.begin(), notes.end());
  return res;
}

OutwardVerdict is_outward_minimising(const RegionMask& mask, double tol, const TvParams& solver, int box_padding) {
  require(tol > 0.0, "is_outward_minimising: tolerance must be positive");
  ObstacleProblem pb{mask.grid, mask, box_padding, solver};
  const HullResult hull = compute_hull(pb);
  OutwardVerdict v;
  v.perimeter = mollified_perimeter(mask);
  require(v.perimeter > 0.0, "is_outward_minimising: mask has zero perimeter");
  v.hull_perimeter = hull.hull_perimeter;
  v.gap = (v.perimeter - v.hull_perimeter) / v.perimeter;
  v.verdict = v.gap <= tol;
  v.report = hull.report;
  return v;
}

}  // namespace hullcap
