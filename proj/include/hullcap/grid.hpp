#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace hullcap {

using Index3 = std::array<int, 3>;
using Point3 = std::array<double, 3>;

/// Structured cell-centred lattice in 2 or 3 dimensions with uniform spacing.
///
/// Cell (i, j, k) has centre origin + (i + 1/2, j + 1/2, k + 1/2) * h. Storage
/// is row-major with axis 0 slowest. In 2D the third axis has extent 1.
///
/// An optional conformal factor phi > 0 turns the flat metric into
/// g = phi^2 * flat; volume and area elements then scale by phi^n and
/// phi^(n-1) respectively.
class Grid {
 public:
  Grid(std::vector<int> dims, double spacing, std::vector<double> origin);

  /// Returns a copy of this grid carrying the given per-cell conformal factor.
  [[nodiscard]] std::shared_ptr<const Grid> with_conformal_factor(std::vector<double> phi) const;

  [[nodiscard]] int dim() const { return n_; }
  [[nodiscard]] const Index3& dims() const { return dims_; }
  [[nodiscard]] int extent(int axis) const { return dims_[axis]; }
  [[nodiscard]] double spacing() const { return h_; }
  [[nodiscard]] const Point3& origin() const { return origin_; }
  [[nodiscard]] std::size_t size() const { return size_; }
  [[nodiscard]] const std::array<std::ptrdiff_t, 3>& strides() const { return strides_; }

  [[nodiscard]] std::size_t index(int i, int j, int k = 0) const {
    return static_cast<std::size_t>((static_cast<std::ptrdiff_t>(i) * dims_[1] + j) * dims_[2] + k);
  }
  [[nodiscard]] Index3 coords(std::size_t idx) const;
  [[nodiscard]] Point3 center(std::size_t idx) const;
  [[nodiscard]] bool contains(const Index3& c) const;

  [[nodiscard]] bool conformal() const { return phi_.has_value(); }
  [[nodiscard]] double phi(std::size_t idx) const { return phi_ ? (*phi_)[idx] : 1.0; }
  [[nodiscard]] std::span<const double> phi_values() const;

  /// phi^n h^n.
  [[nodiscard]] double cell_volume(std::size_t idx) const;
  /// phi^(n-1) h^(n-1).
  [[nodiscard]] double face_area(std::size_t idx) const;

  [[nodiscard]] bool same_shape(const Grid& other) const;
  friend bool operator==(const Grid& a, const Grid& b);

 private:
  int n_ = 2;
  Index3 dims_{1, 1, 1};
  double h_ = 1.0;
  Point3 origin_{0.0, 0.0, 0.0};
  std::size_t size_ = 1;
  std::array<std::ptrdiff_t, 3> strides_{1, 1, 1};
  std::optional<std::vector<double>> phi_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(std::vector<int> dims, double spacing, std::vector<double> origin);

/// Square/cubic grid of `cells` per axis covering [lo, lo + extent]^n.
GridPtr make_box_grid(int n, int cells, double lo, double extent);

/// Real-valued function on a grid.
struct ScalarField {
  GridPtr grid;
  std::vector<double> values;

  ScalarField() = default;
  explicit ScalarField(GridPtr g, double fill = 0.0);
  ScalarField(GridPtr g, std::vector<double> v);

  [[nodiscard]] std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
};

/// Indicator function of a set of cells.
struct RegionMask {
  GridPtr grid;
  std::vector<std::uint8_t> cells;

  RegionMask() = default;
  explicit RegionMask(GridPtr g, bool fill = false);
  RegionMask(GridPtr g, std::vector<std::uint8_t> c);

  [[nodiscard]] std::size_t size() const { return cells.size(); }
  [[nodiscard]] bool operator[](std::size_t i) const { return cells[i] != 0; }
  void set(std::size_t i, bool v) { cells[i] = v ? 1 : 0; }
  [[nodiscard]] std::size_t count() const;
  [[nodiscard]] bool empty() const { return count() == 0; }

  [[nodiscard]] ScalarField indicator() const;
  friend bool operator==(const RegionMask& a, const RegionMask& b);
};

RegionMask mask_union(const RegionMask& a, const RegionMask& b);
RegionMask mask_intersection(const RegionMask& a, const RegionMask& b);
RegionMask mask_complement(const RegionMask& a);
/// Number of cells in exactly one of the two masks.
std::size_t symmetric_difference_count(const RegionMask& a, const RegionMask& b);
/// True if every cell of `inner` lies in `outer`.
bool is_subset(const RegionMask& inner, const RegionMask& outer);
/// Cells of `mask` grown by `layers` steps of face-neighbour dilation.
RegionMask dilate(const RegionMask& mask, int layers);
/// Cells of `mask` shrunk by `layers` steps of face-neighbour erosion.
RegionMask erode(const RegionMask& mask, int layers);
/// inner ⊆ dilate(outer, layers).
bool is_subset_up_to(const RegionMask& inner, const RegionMask& outer, int layers);
/// Both masks agree up to `layers` face-neighbour layers in either direction.
bool equal_up_to(const RegionMask& a, const RegionMask& b, int layers);
/// Smallest distance (in cells) from any set cell to the grid boundary; -1 if empty.
int boundary_clearance(const RegionMask& mask);

void check_same_grid(const GridPtr& a, const GridPtr& b, const char* what);
void check_finite(const ScalarField& f, const char* what);

}  // namespace hullcap
