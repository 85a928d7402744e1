#pragma once

#include <string>

#include "hullcap/grid.hpp"

namespace hullcap {

enum class PerimeterEstimator {
  /// Isotropic forward-difference TV of the raw indicator. Exact on axis-aligned
  /// sets up to (2 - sqrt 2) h at the far corner, biased (~+16%) on curved and
  /// oblique boundaries.
  kForwardTV,
  /// Same TV after a Gaussian mollification of width `kMollifierSigma` cells.
  /// Consistent (<1%) on smooth and polygonal sets; slightly rounds corners.
  kMollified,
};

inline constexpr double kMollifierSigma = 1.5;

struct Measure {
  double volume = 0.0;
  double perimeter = 0.0;
};

/// Volume (sum of phi^n h^n) and perimeter of a mask.
Measure measure(const RegionMask& mask, PerimeterEstimator estimator = PerimeterEstimator::kForwardTV);

/// Weighted isotropic total variation of a field with values in [0, 1].
///
/// Forward differences, a zero ghost layer on every side of the grid and the
/// face weight phi^(n-1) h^(n-1) per cell.
double relaxed_perimeter(const ScalarField& field);

/// Total variation without the [0, 1] check (used for arbitrary fields).
double total_variation(const ScalarField& field);

/// Perimeter of a mask via TV of its Gaussian mollification (sigma in cells).
double mollified_perimeter(const RegionMask& mask, double sigma_cells = kMollifierSigma);

/// Discrete surrogate of the set of density-one points.
///
/// A cell belongs to the result iff the fraction of mask cells inside the
/// digital Euclidean ball of radius `window` around it exceeds 1/2 (cells
/// outside the grid count as empty).
RegionMask measure_theoretic_interior(const RegionMask& mask, int window = 1);

/// Separable Gaussian smoothing with zero extension outside the grid.
ScalarField gaussian_smooth(const ScalarField& field, double sigma_cells);

}  // namespace hullcap
