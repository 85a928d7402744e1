#pragma once

#include <functional>
#include <string>
#include <vector>

namespace hullcap {

/// Large-rho behaviour of a warping function, used for improper integrals.
struct Tail {
  enum class Kind {
    /// f ~ c rho^value
    kPolynomial,
    /// f ~ c exp(value * rho)
    kExponential,
    /// f -> value
    kBounded,
  };
  Kind kind = Kind::kPolynomial;
  double value = 1.0;
};

/// Rotationally symmetric metric d rho^2 + f(rho)^2 g_{S^{n-1}}.
struct WarpedProfile {
  std::string name;
  int n = 2;
  std::function<double(double)> f;
  std::function<double(double)> f_prime;
  Tail tail;
};

/// Builds a profile and checks the declared tail against samples of f.
WarpedProfile make_profile(std::string name, int n, std::function<double(double)> f,
                           std::function<double(double)> f_prime, Tail tail);

/// Bundled profiles: flat, cone (f = a rho), cusp (e^-rho), cylinder (1),
/// cigar (tanh rho), paraboloid (rho / sqrt(1 + rho)), smooth_cone
/// (a rho + (1 - a) tanh rho). `a` is used by the cones only.
WarpedProfile preset_profile(const std::string& name, int n, double a = 0.5);
const std::vector<std::string>& profile_names();

/// Monotone cubic (PCHIP) interpolant through samples (rho_i, f_i), extended
/// past the last sample according to `tail`.
WarpedProfile sampled_profile(std::string name, int n, std::vector<double> rho, std::vector<double> f, Tail tail);

/// |S^{n-1}| and |B^n|.
double unit_sphere_area(int n);
double unit_ball_volume(int n);

double sphere_area(const WarpedProfile& profile, double rho);
double ball_volume(const WarpedProfile& profile, double rho);

struct AvrResult {
  double value = 0.0;
  bool converged = false;
  std::string note;
};

AvrResult avr(const WarpedProfile& profile);

struct RadialCapacity {
  double capacity = 0.0;
  bool parabolic = false;
  /// int_{rho0}^inf f^{-(n-1)/(p-1)}; infinite when parabolic.
  double integral = 0.0;
};

RadialCapacity radial_p_capacity(const WarpedProfile& profile, double rho0, double p);

/// Capacity of {rho < rho0} relative to {rho < R}.
double radial_relative_capacity(const WarpedProfile& profile, double rho0, double R, double p);

struct RadialVerdict {
  enum class Kind { kHullExistsUnique, kNoSolution, kNonUniqueUnboundedVolume };
  Kind kind = Kind::kHullExistsUnique;
  /// Radius of the hull sphere (exists) or where the plateau starts (non-unique); 0 otherwise.
  double witness_radius = 0.0;
  /// inf of the sphere area over [rho0, inf).
  double inf_area = 0.0;
  std::string note;
};

std::string to_string(RadialVerdict::Kind kind);

/// Classification among radial competitors only.
RadialVerdict radial_hull(const WarpedProfile& profile, double rho0);

struct RadialImcf {
  double rho0 = 0.0;
  /// Arrival time by quadrature of the mean curvature (n-1) f'/f.
  std::function<double(double)> w;
  /// sup of w; infinite when w is unbounded.
  double sup = 0.0;
  bool proper_but_bounded = false;
};

RadialImcf radial_imcf(const WarpedProfile& profile, double rho0);

double mean_curvature_radial(const WarpedProfile& profile, double rho);
/// |S^{n-1}| f'(rho)^(n-1).
double willmore_radial(const WarpedProfile& profile, double rho);

}  // namespace hullcap
