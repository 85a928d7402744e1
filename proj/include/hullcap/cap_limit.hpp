#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hullcap/hull_solver.hpp"
#include "hullcap/p_laplace.hpp"
#include "hullcap/study.hpp"
#include "hullcap/warped_radial.hpp"

namespace hullcap {

struct SobolevData {
  int n = 2;
  double C_sob = 0.0;
  double p = 1.5;
  double C_np = 0.0;
  double p_star = 0.0;
  double q_p = 0.0;
};

/// Sharp flat L^1 Sobolev constant 1 / (n |B^n|^(1/n)).
double sharp_sobolev_constant(int n);

/// C_{n,p} = C_sob (n-1) p / (n-p), p* = np / (n-p), q_p = 1 + p*(p-1)/p.
SobolevData sobolev_data(int n, double p, double C_sob);

/// q_p C_{n,p}^((p-1)/p).
double xu_factor(int n, double p, double C_sob);

struct HolopainenResult {
  double value = 0.0;
  bool diverges = false;
  /// Local power-law exponent of the integrand near r_max.
  double tail_exponent = 0.0;
};

/// int_{r0}^{r_max} (t / |B(O,t)|)^(1/(p-1)) dt with a tail-decay verdict.
HolopainenResult holopainen_integral(const std::function<double(double)>& volume_growth, double p, double r0,
                                     double r_max);

struct DecayBound {
  double value = 0.0;
  double exponent = 0.0;
  std::string warning;
};

/// C^(1/(p-1)) / ((b-p)(p-1)) r^(-(b-p)/(p-1)).
DecayBound decay_bound(double p, double b, double C, double r);

struct DecayFit {
  /// Smallest C making the envelope dominate every sample.
  double C = 0.0;
  /// Least-squares log-log slope of the samples versus the predicted -(b-p)/(p-1).
  double fitted_slope = 0.0;
  double predicted_slope = 0.0;
  bool shape_ok = false;
};

DecayFit fit_decay(const std::vector<double>& r, const std::vector<double>& u, double p, double b);

struct LimitStudyConfig {
  std::vector<double> p_schedule{1.5, 1.25, 1.125, 1.0625, 1.03125, 1.015625};
  /// Hull solve settings. When `hull.grid` is set the hull is computed on that
  /// grid and obstacle (e.g. a full box while the potentials use a mirror sector).
  ObstacleProblem hull;
  PLaplaceConfig potential;
  /// Oracle capacity per p (optional).
  std::function<double(double)> oracle;
  double C_sob = 0.0;
  /// Relative slack for the chain checks.
  double tol = 0.02;
  int threads = 1;
};

struct LimitStudy {
  std::vector<double> p_schedule;
  /// Columns: p, capacity, oracle, oracle_gap, xu_factor, xu_bound.
  StudyTable capacities;
  double hull_perimeter = 0.0;
  double cap1_estimate = 0.0;
  bool chain_ok = false;
  double limit_gap = 0.0;
  std::vector<std::string> flags;
  HullResult hull;
};

/// Hull first, then one potential solve per p; rows in schedule order.
LimitStudy run_limit_study(const GridPtr& grid, const RegionMask& obstacle, const LimitStudyConfig& cfg);

/// Same study through the radial engine for the ball {rho < rho0}.
LimitStudy run_radial_limit_study(const WarpedProfile& profile, double rho0, const std::vector<double>& p_schedule,
                                  double tol = 0.02);

/// Log-linear extrapolation of Cap_p to p = 1 from the last two rows (a convenience, flagged as such).
double extrapolate_limit(const StudyTable& capacities);

}  // namespace hullcap
