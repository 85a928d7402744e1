#pragma once

#include <string>
#include <vector>

#include "hullcap/grid.hpp"
#include "hullcap/study.hpp"
#include "hullcap/tv_engine.hpp"

namespace hullcap {

/// P^n / V^(n-1) with the mollified perimeter.
double iso_ratio(const RegionMask& mask);

/// n^((n-1)/n) W^(1/n) v^((n-1)/n).
double conical_profile(double v, double W, int n);

struct IsoConfig {
  /// Starting sets: "center" (distance ball about the container's centroid,
  /// clipped to it), "corner" (about the container cell nearest the grid
  /// origin), "wall" (about the container's lowest-axis-0 cell).
  std::vector<std::string> seeds{"center", "corner"};
  /// Time step as a multiple of h * r_v, r_v the radius of the ball of volume v.
  double tau_factor = 2.0;
  int max_steps = 80;
  /// Steps end when fewer than this many cells change.
  int settle_cells = 0;
  TvParams rof{.max_iters = 2000, .gap_tol = 1e-4, .multilevel = false};
};

struct IsoSet {
  RegionMask set;
  double area = 0.0;
  double volume = 0.0;
  /// Threshold level over tau; reads as the mean curvature of the free boundary.
  double multiplier = 0.0;
  std::string seed;
  SolveReport report;
};

/// Least perimeter (ambient, walls included) among subsets of `container` of volume v,
/// by volume-preserving minimising movements from each seed; the best seed wins.
IsoSet constrained_isoperimetric(const RegionMask& container, double v, const IsoConfig& cfg = {});

struct IsoProfile {
  RegionMask container;
  std::vector<double> volumes;
  std::vector<double> areas;
  std::vector<double> multipliers;
  std::vector<SolveReport> reports;

  [[nodiscard]] StudyTable table() const;
};

IsoProfile iso_profile(const RegionMask& container, const std::vector<double>& volumes, const IsoConfig& cfg = {},
                       int threads = 1);

struct DiniResult {
  std::vector<double> increments;
  bool monotone_ok = false;
  double scale = 0.0;
};

/// Increments of I(v)^(n/(n-1)) - conical(v)^(n/(n-1)); monotone_ok iff all >= -tol * scale,
/// scale = max |I^(n/(n-1))|.
DiniResult dini_comparison(const std::vector<double>& volumes, const std::vector<double>& areas, double W, int n,
                           double tol = 1e-3);
DiniResult dini_comparison(const IsoProfile& profile, double W, double tol = 1e-3);

struct CurvatureReport {
  bool empty_free_boundary = false;
  std::size_t samples = 0;
  double mean = 0.0;
  /// Standard deviation over mean.
  double spread = 0.0;
  bool constant_ok = false;
  /// Multiplier of the set compared with the free-boundary mean.
  double multiplier = 0.0;
  std::string note;
};

/// Curvature of the free boundary from a 2-cell Gaussian surrogate of the indicator.
CurvatureReport mean_curvature_bounds_check(const RegionMask& set, const RegionMask& container,
                                            double multiplier = 0.0);

}  // namespace hullcap
