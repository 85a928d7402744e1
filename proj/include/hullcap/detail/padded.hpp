#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <vector>

#include "hullcap/grid.hpp"

namespace hullcap::detail {

// Grid extended by `margin` ghost layers on every side of each active axis.
// Forward differences are taken on padded cells whose coordinates lie in
// [0, pd - 2] along every active axis, so both the lower and the upper ghost
// faces are charged.
struct Padded {
  int n = 2;
  int margin = 1;
  Index3 pd{1, 1, 1};
  std::array<std::ptrdiff_t, 3> st{1, 1, 1};
  std::size_t size = 1;

  Padded(const Grid& g, int m) : n(g.dim()), margin(m) {
    for (int a = 0; a < n; ++a) pd[a] = g.extent(a) + 2 * m;
    st = {static_cast<std::ptrdiff_t>(pd[1]) * pd[2], pd[2], 1};
    size = static_cast<std::size_t>(pd[0]) * pd[1] * pd[2];
  }

  [[nodiscard]] std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>((static_cast<std::ptrdiff_t>(i) * pd[1] + j) * pd[2] + k);
  }

  [[nodiscard]] std::size_t from_grid(const Grid& g, std::size_t idx) const {
    const Index3 c = g.coords(idx);
    return index(c[0] + margin, n > 1 ? c[1] + margin : c[1], n > 2 ? c[2] + margin : c[2]);
  }

  // Nearest interior grid cell of a padded cell (for metric weights).
  [[nodiscard]] std::size_t clamp_to_grid(const Grid& g, int i, int j, int k) const {
    const int ci = std::clamp(i - margin, 0, g.extent(0) - 1);
    const int cj = std::clamp(j - margin, 0, g.extent(1) - 1);
    const int ck = n > 2 ? std::clamp(k - margin, 0, g.extent(2) - 1) : 0;
    return g.index(ci, cj, ck);
  }

  [[nodiscard]] bool interior(int i, int j, int k, const Grid& g) const {
    if (i < margin || i >= margin + g.extent(0)) return false;
    if (j < margin || j >= margin + g.extent(1)) return false;
    if (n > 2 && (k < margin || k >= margin + g.extent(2))) return false;
    return true;
  }

  // Upper bound (inclusive) of loop coordinates that carry a forward gradient.
  [[nodiscard]] int grad_hi(int axis) const { return axis < n ? pd[axis] - 2 : 0; }

  template <typename F>
  void for_each_gradient_cell(F&& f) const {
    for (int i = 0; i <= grad_hi(0); ++i)
      for (int j = 0; j <= grad_hi(1); ++j)
        for (int k = 0; k <= grad_hi(2); ++k) f(index(i, j, k), i, j, k);
  }

  std::vector<double> embed(const Grid& g, const std::vector<double>& v) const {
    std::vector<double> out(size, 0.0);
    for (std::size_t idx = 0; idx < g.size(); ++idx) out[from_grid(g, idx)] = v[idx];
    return out;
  }

  std::vector<double> extract(const Grid& g, const std::vector<double>& p) const {
    std::vector<double> out(g.size());
    for (std::size_t idx = 0; idx < g.size(); ++idx) out[idx] = p[from_grid(g, idx)];
    return out;
  }

  // Per padded cell weight phi^(n-1) h^(n-1), phi clamped from the grid.
  std::vector<double> face_weights(const Grid& g) const {
    std::vector<double> w(size, 0.0);
    for (int i = 0; i < pd[0]; ++i)
      for (int j = 0; j < pd[1]; ++j)
        for (int k = 0; k < pd[2]; ++k) w[index(i, j, k)] = g.face_area(clamp_to_grid(g, i, j, k));
    return w;
  }
};

}  // namespace hullcap::detail
