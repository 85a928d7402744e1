#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hullcap/grid.hpp"
#include "hullcap/study.hpp"

namespace hullcap {

/// Distribution function of a nonnegative field and its Schwarz rearrangement.
struct Rearrangement {
  int n = 2;
  /// Decreasing levels T = t_0 > ... > t_m = 0.
  std::vector<double> t_samples;
  /// V(t) = |{f >= t}|.
  std::vector<double> V;
  /// (V / |B^n|)^(1/n).
  std::vector<double> rho;
  /// Knots of the radial profile F, rho increasing, F nonincreasing.
  std::vector<double> knot_rho;
  std::vector<double> knot_F;
  /// Number of t levels that shared a radius with a higher level (plateaus of V).
  int plateaus = 0;
  /// Minimum number of equal-volume bands over which F' is resolved in the energy.
  int energy_bands = 128;

  /// Piecewise-linear F on [0, rho(0)], zero beyond.
  [[nodiscard]] double F(double r) const;
  /// |S^{n-1}| int (F')^2 r^(n-1) dr.
  [[nodiscard]] double dirichlet_energy() const;
  /// |S^{n-1}| int F^q r^(n-1) dr, q in {1, 2}.
  [[nodiscard]] double mass(int q) const;
};

/// `field` must be >= 0 on `support` and zero elsewhere.
Rearrangement distribution_function(const ScalarField& field, const RegionMask& support, int t_count = 2048);

struct PolyaSzegoResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double l1_defect = 0.0;
  double l2_defect = 0.0;
  bool holds = false;
};

/// lhs = discrete Dirichlet energy of f (forward differences, zero outside the
/// support); rhs = C_g^(2/n) times the radial energy of F. holds iff
/// lhs >= rhs (1 - tol).
PolyaSzegoResult polya_szego_check(const ScalarField& field, const RegionMask& support, double C_g = 1.0,
                                   int t_count = 2048, double tol = 5e-3);

/// Discrete Dirichlet energy sum vol |D f|^2 with zero outside `support`.
double dirichlet_energy(const ScalarField& field, const RegionMask& support);

/// Smooth nonnegative Gaussian mixture times a bump vanishing on the grid boundary.
ScalarField random_smooth_field(const GridPtr& grid, std::uint64_t seed);

struct CampaignResult {
  /// trial, lhs, rhs, l2_defect, holds
  StudyTable table;
  int trials = 0;
  int held = 0;
  double max_l2_defect = 0.0;
};

/// Random smooth fields on the whole grid, trial k seeded by seed + k.
CampaignResult polya_szego_campaign(const GridPtr& grid, int trials, std::uint64_t seed, int t_count = 2048,
                                    int threads = 1, double C_g = 1.0);

struct Eigenpair {
  double lambda1 = 0.0;
  /// Positive, unit L2 norm.
  ScalarField eigenfield;
  SolveReport report;
};

/// Smallest eigenvalue of the 5-point (7-point) Laplacian on the support, zero on its bounding faces.
Eigenpair first_eigenvalue(const RegionMask& support, double tol = 1e-8);

/// First Dirichlet eigenvalue of the flat ball of the given volume.
double ball_first_eigenvalue(int n, double volume);

struct FaberKrahnResult {
  double lambda = 0.0;
  double bound = 0.0;
  bool holds = false;
};

/// bound = avr^(2/n) lambda_1(ball of the support's volume); holds iff lambda >= bound (1 - tol).
FaberKrahnResult faber_krahn_check(const RegionMask& support, double avr, double tol = 1e-2);

}  // namespace hullcap
