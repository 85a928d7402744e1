#include "hullcap/symmetrization.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "hullcap/detail/parallel.hpp"
#include "hullcap/errors.hpp"
#include "hullcap/warped_radial.hpp"

namespace hullcap {

namespace {

bool on_support_boundary(const RegionMask& support, std::size_t i) {
  const Grid& g = *support.grid;
  const Index3 c = g.coords(i);
  for (int a = 0; a < g.dim(); ++a) {
    for (int s : {-1, 1}) {
      Index3 q = c;
      q[a] += s;
      if (!g.contains(q) || !support.cells[g.index(q[0], q[1], q[2])]) return true;
    }
  }
  return false;
}

void check_field(const ScalarField& field, const RegionMask& support, const char* what) {
  require(field.grid && support.grid, std::string(what) + ": missing grid");
  check_same_grid(field.grid, support.grid, what);
  for (std::size_t i = 0; i < field.size(); ++i) {
    const double v = field[i];
    require(std::isfinite(v), std::string(what) + ": field is not finite");
    if (support.cells[i]) {
      require(v >= 0.0, std::string(what) + ": field must be nonnegative");
    } else {
      require(v == 0.0, std::string(what) + ": field must vanish outside the support");
    }
  }
}

}  // namespace

double Rearrangement::F(double r) const {
  if (knot_rho.empty() || r >= knot_rho.back()) return 0.0;
  if (r <= knot_rho.front()) return knot_F.front();
  const auto it = std::upper_bound(knot_rho.begin(), knot_rho.end(), r);
  const std::size_t k = static_cast<std::size_t>(it - knot_rho.begin());
  const double r0 = knot_rho[k - 1], r1 = knot_rho[k];
  const double s = (r - r0) / (r1 - r0);
  return knot_F[k - 1] + s * (knot_F[k] - knot_F[k - 1]);
}

double Rearrangement::dirichlet_energy() const {
  // Lattice counts make V noisy at the level spacing; difference quotients over
  // such noise inflate the energy, so the slopes are taken over bands of at
  // least 1/energy_bands of the total volume.
  const double band = std::pow(knot_rho.back(), n) / energy_bands;
  double e = 0.0;
  std::size_t k0 = 0;
  for (std::size_t k = 1; k < knot_rho.size(); ++k) {
    const double r0 = knot_rho[k0], r1 = knot_rho[k];
    if (k + 1 < knot_rho.size() && std::pow(r1, n) - std::pow(r0, n) < band) continue;
    const double s = (knot_F[k] - knot_F[k0]) / (r1 - r0);
    e += s * s * (std::pow(r1, n) - std::pow(r0, n)) / n;
    k0 = k;
  }
  return unit_sphere_area(n) * e;
}

double Rearrangement::mass(int q) const {
  require(q == 1 || q == 2, "Rearrangement::mass: q must be 1 or 2");
  using Gauss = boost::math::quadrature::gauss<double, 5>;
  double m = 0.0;
  for (std::size_t k = 0; k + 1 < knot_rho.size(); ++k) {
    const double r0 = knot_rho[k], r1 = knot_rho[k + 1];
    const double f0 = knot_F[k], f1 = knot_F[k + 1];
    m += Gauss::integrate(
        [&](double r) {
          const double f = f0 + (r - r0) / (r1 - r0) * (f1 - f0);
          return std::pow(f, q) * std::pow(r, n - 1);
        },
        r0, r1);
  }
  return unit_sphere_area(n) * m;
}

Rearrangement distribution_function(const ScalarField& field, const RegionMask& support, int t_count) {
  check_field(field, support, "distribution_function");
  require(t_count >= 2, "distribution_function: need at least 2 levels");
  const Grid& g = *field.grid;
  std::vector<std::pair<double, double>> cells;  // value, volume
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (support.cells[i]) cells.emplace_back(field[i], g.cell_volume(i));
  }
  std::sort(cells.begin(), cells.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  require(!cells.empty() && cells.front().first > 0.0, "distribution_function: field is identically zero");

  Rearrangement R;
  R.n = g.dim();
  const double T = cells.front().first;
  const double ball = unit_ball_volume(R.n);
  std::size_t j = 0;
  double acc = 0.0;
  for (int k = 0; k <= t_count; ++k) {
    const double t = k == t_count ? 0.0 : T * (1.0 - double(k) / t_count);
    while (j < cells.size() && cells[j].first >= t) acc += cells[j++].second;
    R.t_samples.push_back(t);
    R.V.push_back(acc);
    R.rho.push_back(std::pow(acc / ball, 1.0 / R.n));
  }
  // F = rho^-1 through distinct radii; a repeated radius keeps its highest level.
  R.knot_rho.push_back(0.0);
  R.knot_F.push_back(T);
  for (std::size_t k = 0; k < R.rho.size(); ++k) {
    if (R.rho[k] > R.knot_rho.back()) {
      R.knot_rho.push_back(R.rho[k]);
      R.knot_F.push_back(R.t_samples[k]);
    } else if (k > 0) {
      ++R.plateaus;
    }
  }
  return R;
}

double dirichlet_energy(const ScalarField& field, const RegionMask& support) {
  check_same_grid(field.grid, support.grid, "dirichlet_energy");
  const Grid& g = *field.grid;
  const int n = g.dim();
  const double h = g.spacing();
  auto value = [&](const Index3& c) {
    if (!g.contains(c)) return 0.0;
    const std::size_t i = g.index(c[0], c[1], c[2]);
    return support.cells[i] ? field[i] : 0.0;
  };
  double e = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Index3 c = g.coords(i);
    const double w = std::pow(g.phi(i) * h, n - 2);
    const double f0 = value(c);
    for (int a = 0; a < n; ++a) {
      Index3 q = c;
      q[a] += 1;
      const double d = value(q) - f0;
      e += w * d * d;
      if (c[a] == 0) e += w * f0 * f0;  // face to the lower ghost layer
    }
  }
  return e;
}

PolyaSzegoResult polya_szego_check(const ScalarField& field, const RegionMask& support, double C_g, int t_count,
                                   double tol) {
  require(C_g > 0.0 && C_g <= 1.0, "polya_szego_check: C_g must lie in (0, 1]");
  const Rearrangement R = distribution_function(field, support, t_count);
  const Grid& g = *field.grid;
  const double T = R.knot_F.front();
  double edge = 0.0, l1 = 0.0, l2 = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!support.cells[i]) continue;
    const double v = g.cell_volume(i);
    l1 += v * field[i];
    l2 += v * field[i] * field[i];
    if (on_support_boundary(support, i)) edge = std::max(edge, field[i]);
  }
  if (edge > 0.05 * T) {
    throw InvalidArgument("polya_szego_check: field does not vanish on the support boundary (" + format_double(edge) +
                          " vs max " + format_double(T) + ")");
  }
  PolyaSzegoResult out;
  out.lhs = dirichlet_energy(field, support);
  out.rhs = std::pow(C_g, 2.0 / R.n) * R.dirichlet_energy();
  out.l1_defect = std::abs(R.mass(1) - l1) / l1;
  out.l2_defect = std::abs(R.mass(2) - l2) / l2;
  out.holds = out.lhs >= out.rhs * (1.0 - tol);
  return out;
}

ScalarField random_smooth_field(const GridPtr& grid, std::uint64_t seed) {
  const Grid& g = *grid;
  const int n = g.dim();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> centre(0.15, 0.85), width(0.05, 0.2), amp(0.2, 1.0);
  std::uniform_int_distribution<int> count(3, 8);
  struct Bump {
    double c[3];
    double s;
    double a;
  };
  std::vector<Bump> bumps(count(rng));
  for (auto& b : bumps) {
    for (int a = 0; a < 3; ++a) b.c[a] = a < n ? centre(rng) : 0.0;
    b.s = width(rng);
    b.a = amp(rng);
  }
  ScalarField f(grid);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Index3 c = g.coords(i);
    double x[3] = {0.0, 0.0, 0.0};
    double envelope = 1.0;
    for (int a = 0; a < n; ++a) {
      x[a] = (c[a] + 0.5) / g.extent(a);
      const double e = 4.0 * x[a] * (1.0 - x[a]);
      envelope *= e * e;
    }
    double s = 0.0;
    for (const auto& b : bumps) {
      double d2 = 0.0;
      for (int a = 0; a < n; ++a) d2 += (x[a] - b.c[a]) * (x[a] - b.c[a]);
      s += b.a * std::exp(-0.5 * d2 / (b.s * b.s));
    }
    f[i] = envelope * s;
  }
  return f;
}

CampaignResult polya_szego_campaign(const GridPtr& grid, int trials, std::uint64_t seed, int t_count, int threads,
                                    double C_g) {
  require(trials > 0, "polya_szego_campaign: need at least one trial");
  const RegionMask support(grid, true);
  std::vector<PolyaSzegoResult> res(trials);
  detail::parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t k) {
    res[k] = polya_szego_check(random_smooth_field(grid, seed + k), support, C_g, t_count);
  });
  CampaignResult out;
  out.table = StudyTable({"trial", "lhs", "rhs", "l2_defect", "holds"});
  out.table.metadata["seed"] = std::to_string(seed);
  out.table.metadata["t_count"] = std::to_string(t_count);
  out.table.metadata["C_g"] = format_double(C_g);
  out.trials = trials;
  for (int k = 0; k < trials; ++k) {
    const auto& r = res[k];
    out.table.add_row({double(k), r.lhs, r.rhs, r.l2_defect, r.holds ? 1.0 : 0.0});
    out.held += r.holds ? 1 : 0;
    out.max_l2_defect = std::max(out.max_l2_defect, r.l2_defect);
  }
  return out;
}

Eigenpair first_eigenvalue(const RegionMask& support, double tol) {
  require(support.grid != nullptr, "first_eigenvalue: support has no grid");
  const Grid& g = *support.grid;
  require(!g.conformal(), "first_eigenvalue: only flat grids are supported");
  require(tol > 0.0, "first_eigenvalue: tolerance must be positive");
  require(!erode(support, 2).empty(), "first_eigenvalue: support must be at least 5 cells thick");
  const int n = g.dim();
  const double h = g.spacing();
  const double ih2 = 1.0 / (h * h);

  std::vector<long> id(g.size(), -1);
  std::vector<std::size_t> cells;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (support.cells[i]) {
      id[i] = static_cast<long>(cells.size());
      cells.push_back(i);
    }
  }
  const long m = static_cast<long>(cells.size());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(cells.size() * (2 * n + 1));
  for (long r = 0; r < m; ++r) {
    const Index3 c = g.coords(cells[r]);
    // Zero on the cell faces bounding the support: the ghost value is -u.
    double diag = 2.0 * n * ih2;
    for (int a = 0; a < n; ++a) {
      for (int s : {-1, 1}) {
        Index3 q = c;
        q[a] += s;
        const long col = g.contains(q) ? id[g.index(q[0], q[1], q[2])] : -1;
        if (col >= 0) {
          trip.emplace_back(r, col, -ih2);
        } else {
          diag += ih2;
        }
      }
    }
    trip.emplace_back(r, r, diag);
  }
  Eigen::SparseMatrix<double> A(m, m);
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(1e-9);
  cg.setMaxIterations(20 * m);
  cg.compute(A);

  Eigen::VectorXd x = Eigen::VectorXd::Ones(m).normalized();
  double lambda = x.dot(A * x);
  Eigenpair out;
  out.report.solver = "inverse power iteration, CG inner solves";
  int it = 0;
  for (it = 1; it <= 500; ++it) {
    Eigen::VectorXd y = cg.solveWithGuess(x, x / lambda);
    if (cg.info() != Eigen::Success) throw SolverError("first_eigenvalue: inner CG solve failed");
    x = y.normalized();
    const double next = x.dot(A * x);
    const double change = std::abs(next - lambda) / next;
    lambda = next;
    out.report.gap = change;
    if (change <= tol) {
      out.report.converged = true;
      break;
    }
  }
  out.report.iterations = std::min(it, 500);
  if (!out.report.converged) throw SolverError("first_eigenvalue: inverse iteration stagnated");
  if (x.sum() < 0.0) x = -x;
  out.lambda1 = lambda;
  out.report.objective = lambda;
  out.eigenfield = ScalarField(support.grid);
  const double scale = 1.0 / std::sqrt(std::pow(h, n));
  for (long r = 0; r < m; ++r) out.eigenfield[cells[r]] = x[r] * scale;
  return out;
}

double ball_first_eigenvalue(int n, double volume) {
  require(n >= 2 && volume > 0.0, "ball_first_eigenvalue: need n >= 2 and positive volume");
  const double R = std::pow(volume / unit_ball_volume(n), 1.0 / n);
  const double j = boost::math::cyl_bessel_j_zero(0.5 * n - 1.0, 1);
  return j * j / (R * R);
}

FaberKrahnResult faber_krahn_check(const RegionMask& support, double avr, double tol) {
  require(avr > 0.0 && avr <= 1.0, "faber_krahn_check: avr must lie in (0, 1]");
  const Grid& g = *support.grid;
  double vol = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (support.cells[i]) vol += g.cell_volume(i);
  }
  FaberKrahnResult out;
  out.lambda = first_eigenvalue(support).lambda1;
  out.bound = std::pow(avr, 2.0 / g.dim()) * ball_first_eigenvalue(g.dim(), vol);
  out.holds = out.lambda >= out.bound * (1.0 - tol);
  return out;
}

}  // namespace hullcap
