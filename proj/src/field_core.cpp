#include "hullcap/field_core.hpp"

#include <cmath>
#include <vector>

#include "hullcap/detail/padded.hpp"
#include "hullcap/errors.hpp"

namespace hullcap {

namespace {

// Forward-difference isotropic TV of a padded array with per-cell weights.
double padded_tv(const detail::Padded& pad, const std::vector<double>& u, const std::vector<double>& w) {
  double total = 0.0;
  pad.for_each_gradient_cell([&](std::size_t c, int, int, int) {
    double s = 0.0;
    for (int a = 0; a < pad.n; ++a) {
      const double d = u[c + pad.st[a]] - u[c];
      s += d * d;
    }
    if (s > 0.0) total += w[c] * std::sqrt(s);
  });
  return total;
}

std::vector<double> gaussian_kernel(double sigma, int& radius) {
  radius = static_cast<int>(std::ceil(4.0 * sigma));
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (int o = -radius; o <= radius; ++o) {
    k[o + radius] = std::exp(-0.5 * o * o / (sigma * sigma));
    sum += k[o + radius];
  }
  for (auto& v : k) v /= sum;
  return k;
}

// In-place separable convolution on a padded array (zero outside).
void blur_padded(const detail::Padded& pad, std::vector<double>& u, const std::vector<double>& kernel, int radius) {
  std::vector<double> tmp(u.size());
  for (int a = 0; a < pad.n; ++a) {
    const std::ptrdiff_t s = pad.st[a];
    const int len = pad.pd[a];
    for (int i = 0; i < pad.pd[0]; ++i)
      for (int j = 0; j < pad.pd[1]; ++j)
        for (int k = 0; k < pad.pd[2]; ++k) {
          const Index3 c{i, j, k};
          const int pos = c[a];
          const std::size_t idx = pad.index(i, j, k);
          double acc = 0.0;
          for (int o = -radius; o <= radius; ++o) {
            const int q = pos + o;
            if (q < 0 || q >= len) continue;
            acc += kernel[o + radius] * u[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(idx) + o * s)];
          }
          tmp[idx] = acc;
        }
    u.swap(tmp);
  }
}

}  // namespace

double total_variation(const ScalarField& field) {
  const Grid& g = *field.grid;
  const detail::Padded pad(g, 1);
  return padded_tv(pad, pad.embed(g, field.values), pad.face_weights(g));
}

double relaxed_perimeter(const ScalarField& field) {
  for (double v : field.values) {
    if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument("relaxed_perimeter: field values must lie in [0, 1]");
  }
  return total_variation(field);
}

double mollified_perimeter(const RegionMask& mask, double sigma_cells) {
  require(sigma_cells > 0.0, "mollified_perimeter: sigma must be positive");
  const Grid& g = *mask.grid;
  int radius = 0;
  const auto kernel = gaussian_kernel(sigma_cells, radius);
  const detail::Padded pad(g, radius + 1);
  std::vector<double> u(pad.size, 0.0);
  for (std::size_t idx = 0; idx < g.size(); ++idx) u[pad.from_grid(g, idx)] = mask.cells[idx] ? 1.0 : 0.0;
  blur_padded(pad, u, kernel, radius);
  return padded_tv(pad, u, pad.face_weights(g));
}

Measure measure(const RegionMask& mask, PerimeterEstimator estimator) {
  const Grid& g = *mask.grid;
  Measure m;
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (mask.cells[idx]) m.volume += g.cell_volume(idx);
  }
  m.perimeter = estimator == PerimeterEstimator::kForwardTV ? total_variation(mask.indicator())
                                                            : mollified_perimeter(mask);
  return m;
}

ScalarField gaussian_smooth(const ScalarField& field, double sigma_cells) {
  require(sigma_cells > 0.0, "gaussian_smooth: sigma must be positive");
  const Grid& g = *field.grid;
  int radius = 0;
  const auto kernel = gaussian_kernel(sigma_cells, radius);
  const detail::Padded pad(g, 0);
  std::vector<double> u = field.values;
  blur_padded(pad, u, kernel, radius);
  return ScalarField(field.grid, std::move(u));
}

RegionMask measure_theoretic_interior(const RegionMask& mask, int window) {
  require(window >= 1, "measure_theoretic_interior: window must be >= 1");
  const Grid& g = *mask.grid;
  const int n = g.dim();
  std::vector<Index3> ball;
  const int kz = n > 2 ? window : 0;
  for (int i = -window; i <= window; ++i)
    for (int j = -window; j <= window; ++j)
      for (int k = -kz; k <= kz; ++k) {
        if (i * i + j * j + k * k <= window * window) ball.push_back({i, j, k});
      }
  const double half = 0.5 * static_cast<double>(ball.size());
  RegionMask out(mask.grid);
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    const Index3 c = g.coords(idx);
    int inside = 0;
    for (const auto& o : ball) {
      const Index3 q{c[0] + o[0], c[1] + o[1], c[2] + o[2]};
      if (g.contains(q) && mask.cells[g.index(q[0], q[1], q[2])]) ++inside;
    }
    out.cells[idx] = inside > half ? 1 : 0;
  }
  return out;
}

}  // namespace hullcap
