#include "hullcap/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hullcap/errors.hpp"

namespace hullcap {

Grid::Grid(std::vector<int> dims, double spacing, std::vector<double> origin) {
  require(dims.size() == 2 || dims.size() == 3, "grid dimension must be 2 or 3");
  require(origin.size() == dims.size(), "grid origin must have one entry per axis");
  require(spacing > 0.0 && std::isfinite(spacing), "grid spacing must be positive");
  n_ = static_cast<int>(dims.size());
  for (int a = 0; a < n_; ++a) {
    require(dims[a] >= 4, "grid extent must be at least 4 cells per axis");
    dims_[a] = dims[a];
    origin_[a] = origin[a];
  }
  h_ = spacing;
  size_ = static_cast<std::size_t>(dims_[0]) * dims_[1] * dims_[2];
  strides_ = {static_cast<std::ptrdiff_t>(dims_[1]) * dims_[2], dims_[2], 1};
}

std::shared_ptr<const Grid> Grid::with_conformal_factor(std::vector<double> phi) const {
  require(phi.size() == size_, "conformal factor must have the grid's shape");
  for (double v : phi) {
    require(std::isfinite(v) && v > 0.0, "conformal factor must be strictly positive");
  }
  auto g = std::make_shared<Grid>(*this);
  g->phi_ = std::move(phi);
  return g;
}

Index3 Grid::coords(std::size_t idx) const {
  const auto k = static_cast<int>(idx % dims_[2]);
  idx /= dims_[2];
  const auto j = static_cast<int>(idx % dims_[1]);
  const auto i = static_cast<int>(idx / dims_[1]);
  return {i, j, k};
}

Point3 Grid::center(std::size_t idx) const {
  const Index3 c = coords(idx);
  Point3 p{0.0, 0.0, 0.0};
  for (int a = 0; a < n_; ++a) p[a] = origin_[a] + (c[a] + 0.5) * h_;
  return p;
}

bool Grid::contains(const Index3& c) const {
  for (int a = 0; a < 3; ++a) {
    if (c[a] < 0 || c[a] >= dims_[a]) return false;
  }
  return true;
}

std::span<const double> Grid::phi_values() const {
  if (!phi_) return {};
  return {phi_->data(), phi_->size()};
}

double Grid::cell_volume(std::size_t idx) const {
  const double s = phi(idx) * h_;
  return n_ == 2 ? s * s : s * s * s;
}

double Grid::face_area(std::size_t idx) const {
  const double s = phi(idx) * h_;
  return n_ == 2 ? s : s * s;
}

bool Grid::same_shape(const Grid& other) const { return n_ == other.n_ && dims_ == other.dims_; }

bool operator==(const Grid& a, const Grid& b) {
  return a.n_ == b.n_ && a.dims_ == b.dims_ && a.h_ == b.h_ && a.origin_ == b.origin_ && a.phi_ == b.phi_;
}

GridPtr make_grid(std::vector<int> dims, double spacing, std::vector<double> origin) {
  return std::make_shared<Grid>(std::move(dims), spacing, std::move(origin));
}

GridPtr make_box_grid(int n, int cells, double lo, double extent) {
  require(cells > 0 && extent > 0.0, "box grid needs positive cells and extent");
  return make_grid(std::vector<int>(n, cells), extent / cells, std::vector<double>(n, lo));
}

ScalarField::ScalarField(GridPtr g, double fill) : grid(std::move(g)) {
  require(grid != nullptr, "field needs a grid");
  values.assign(grid->size(), fill);
}

ScalarField::ScalarField(GridPtr g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
  require(grid != nullptr, "field needs a grid");
  require(values.size() == grid->size(), "field values do not match the grid shape");
}

RegionMask::RegionMask(GridPtr g, bool fill) : grid(std::move(g)) {
  require(grid != nullptr, "mask needs a grid");
  cells.assign(grid->size(), fill ? 1 : 0);
}

RegionMask::RegionMask(GridPtr g, std::vector<std::uint8_t> c) : grid(std::move(g)), cells(std::move(c)) {
  require(grid != nullptr, "mask needs a grid");
  require(cells.size() == grid->size(), "mask does not match the grid shape");
  for (auto& v : cells) v = v ? 1 : 0;
}

std::size_t RegionMask::count() const {
  return static_cast<std::size_t>(std::count(cells.begin(), cells.end(), std::uint8_t{1}));
}

ScalarField RegionMask::indicator() const {
  ScalarField f(grid);
  for (std::size_t i = 0; i < cells.size(); ++i) f.values[i] = cells[i] ? 1.0 : 0.0;
  return f;
}

bool operator==(const RegionMask& a, const RegionMask& b) {
  return a.grid->same_shape(*b.grid) && a.cells == b.cells;
}

void check_same_grid(const GridPtr& a, const GridPtr& b, const char* what) {
  if (!a || !b || !a->same_shape(*b)) {
    throw InvalidArgument(std::string(what) + ": mismatched grid shapes");
  }
}

void check_finite(const ScalarField& f, const char* what) {
  for (double v : f.values) {
    if (!std::isfinite(v)) throw InvalidArgument(std::string(what) + ": non-finite field value");
  }
}

namespace {

template <typename Op>
RegionMask combine(const RegionMask& a, const RegionMask& b, Op op) {
  check_same_grid(a.grid, b.grid, "mask operation");
  RegionMask out(a.grid);
  for (std::size_t i = 0; i < a.size(); ++i) out.cells[i] = op(a.cells[i] != 0, b.cells[i] != 0) ? 1 : 0;
  return out;
}

RegionMask morph_step(const RegionMask& m, bool grow) {
  const Grid& g = *m.grid;
  RegionMask out = m;
  for (std::size_t idx = 0; idx < m.size(); ++idx) {
    if ((m.cells[idx] != 0) == grow) continue;
    const Index3 c = g.coords(idx);
    bool flip = false;
    for (int a = 0; a < g.dim() && !flip; ++a) {
      for (int s : {-1, 1}) {
        Index3 nb = c;
        nb[a] += s;
        // Outside the grid counts as empty.
        const bool nb_in = g.contains(nb) && m.cells[g.index(nb[0], nb[1], nb[2])] != 0;
        if (grow ? nb_in : !nb_in) {
          flip = true;
          break;
        }
      }
    }
    if (flip) out.cells[idx] = grow ? 1 : 0;
  }
  return out;
}

}  // namespace

RegionMask mask_union(const RegionMask& a, const RegionMask& b) {
  return combine(a, b, [](bool x, bool y) { return x || y; });
}

RegionMask mask_intersection(const RegionMask& a, const RegionMask& b) {
  return combine(a, b, [](bool x, bool y) { return x && y; });
}

RegionMask mask_complement(const RegionMask& a) {
  RegionMask out(a.grid);
  for (std::size_t i = 0; i < a.size(); ++i) out.cells[i] = a.cells[i] ? 0 : 1;
  return out;
}

std::size_t symmetric_difference_count(const RegionMask& a, const RegionMask& b) {
  check_same_grid(a.grid, b.grid, "symmetric difference");
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += (a.cells[i] != b.cells[i]) ? 1 : 0;
  return n;
}

bool is_subset(const RegionMask& inner, const RegionMask& outer) {
  check_same_grid(inner.grid, outer.grid, "subset test");
  for (std::size_t i = 0; i < inner.size(); ++i) {
    if (inner.cells[i] && !outer.cells[i]) return false;
  }
  return true;
}

RegionMask dilate(const RegionMask& mask, int layers) {
  RegionMask out = mask;
  for (int l = 0; l < layers; ++l) out = morph_step(out, true);
  return out;
}

RegionMask erode(const RegionMask& mask, int layers) {
  RegionMask out = mask;
  for (int l = 0; l < layers; ++l) out = morph_step(out, false);
  return out;
}

bool is_subset_up_to(const RegionMask& inner, const RegionMask& outer, int layers) {
  return is_subset(inner, dilate(outer, layers));
}

bool equal_up_to(const RegionMask& a, const RegionMask& b, int layers) {
  return is_subset_up_to(a, b, layers) && is_subset_up_to(b, a, layers);
}

int boundary_clearance(const RegionMask& mask) {
  const Grid& g = *mask.grid;
  int best = -1;
  for (std::size_t idx = 0; idx < mask.size(); ++idx) {
    if (!mask.cells[idx]) continue;
    const Index3 c = g.coords(idx);
    int d = c[0];
    for (int a = 0; a < g.dim(); ++a) d = std::min({d, c[a], g.extent(a) - 1 - c[a]});
    if (best < 0 || d < best) best = d;
  }
  return best;
}

}  // namespace hullcap
