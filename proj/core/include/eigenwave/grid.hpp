#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "eigenwave/boundary.hpp"

namespace eigenwave {

struct AxisExtent {
  double lo = 0.0;
  double hi = 1.0;
};

enum class PointKind : std::uint8_t { Interior, Boundary, Ghost };

/// Tensor-product Cartesian grid on an axis-aligned box in 1-3 dimensions.
///
/// Axis d has points i = -g..n_d+g where g is the ghost width; unused axes
/// (d >= dim) carry a single point with index 0 and no ghosts, so loops can
/// always run over three axes.
class StructuredGrid {
 public:
  StructuredGrid() = default;

  /// Throws ConfigError for dim outside 1..3, degenerate extents,
  /// fewer than 4 cells on an axis or a ghost width outside {1,2}.
  StructuredGrid(int dim, std::span<const AxisExtent> extents, std::span<const int> n_cells,
                 int ghost_width);

  int dim() const noexcept { return dim_; }
  int ghost_width() const noexcept { return ghost_width_; }
  int cells(int axis) const noexcept { return cells_[axis]; }
  double spacing(int axis) const noexcept { return spacing_[axis]; }
  AxisExtent extent(int axis) const noexcept { return extents_[axis]; }

  /// Ghost layers on this axis (0 for unused axes).
  int ghost(int axis) const noexcept { return axis < dim_ ? ghost_width_ : 0; }
  /// Stored points on this axis including ghosts.
  int stored(int axis) const noexcept { return stored_[axis]; }
  std::ptrdiff_t stride(int axis) const noexcept { return strides_[axis]; }
  std::size_t num_points() const noexcept { return num_points_; }

  std::size_t index(int i, int j = 0, int k = 0) const noexcept {
    return static_cast<std::size_t>((i + ghost(0)) * strides_[0] + (j + ghost(1)) * strides_[1] +
                                    (k + ghost(2)) * strides_[2]);
  }
  /// Inverse of index(): the logical multi-index of a flat position.
  std::array<int, 3> multi_index(std::size_t flat) const noexcept;

  /// x_i = lo + i*h, returning hi exactly at i = cells.
  double coordinate(int axis, int i) const noexcept;

  /// Geometric classification, independent of boundary conditions.
  PointKind classify(std::size_t flat) const noexcept;

  /// Same grid with a different ghost width.
  StructuredGrid with_ghost_width(int ghost_width) const;
  /// Factor-2 coarsening of every used axis (cells must be even).
  StructuredGrid coarsened() const;

  bool operator==(const StructuredGrid& other) const = default;

 private:
  void finalize();

  int dim_ = 0;
  int ghost_width_ = 1;
  std::array<AxisExtent, 3> extents_{};
  std::array<int, 3> cells_{0, 0, 0};
  std::array<double, 3> spacing_{1.0, 1.0, 1.0};
  std::array<int, 3> stored_{1, 1, 1};
  std::array<std::ptrdiff_t, 3> strides_{1, 1, 1};
  std::size_t num_points_ = 0;
};

StructuredGrid build_grid(int dim, std::span<const AxisExtent> extents, std::span<const int> n_cells,
                          int ghost_width);

/// Real field over every stored point of a grid, ghosts included.
class GridFunction {
 public:
  GridFunction() = default;
  explicit GridFunction(const StructuredGrid& grid, double fill = 0.0)
      : grid_(grid), values_(grid.num_points(), fill) {}

  const StructuredGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  double& at(int i, int j = 0, int k = 0) { return values_[grid_.index(i, j, k)]; }
  double at(int i, int j = 0, int k = 0) const { return values_[grid_.index(i, j, k)]; }

  double& operator[](std::size_t flat) { return values_[flat]; }
  double operator[](std::size_t flat) const { return values_[flat]; }

 private:
  StructuredGrid grid_;
  std::vector<double> values_;
};

/// The unknowns of the eigenproblem: a tensor box of grid points.
///
/// Dirichlet faces exclude their boundary points, Neumann faces include
/// them. Packed order is lexicographic with x fastest. On Neumann faces the
/// packed value carries the square root of the trapezoid weight (1/2 per
/// Neumann face the point sits on), which makes the discrete Laplacian
/// symmetric in the Euclidean inner product of active vectors.
class ActiveLayout {
 public:
  ActiveLayout() = default;
  ActiveLayout(const StructuredGrid& grid, const BoundaryConditionSpec& bc);

  const StructuredGrid& grid() const noexcept { return grid_; }
  const BoundaryConditionSpec& bc() const noexcept { return bc_; }
  std::size_t size() const noexcept { return size_; }

  int first(int axis) const noexcept { return first_[axis]; }
  int last(int axis) const noexcept { return last_[axis]; }
  int count(int axis) const noexcept { return last_[axis] - first_[axis] + 1; }

  bool weighted() const noexcept { return !sqrt_weight_.empty(); }
  /// Square-root trapezoid weight of active point a (1 for unweighted layouts).
  double sqrt_weight(std::size_t a) const noexcept {
    return sqrt_weight_.empty() ? 1.0 : sqrt_weight_[a];
  }

  /// Flat grid index of active point a.
  std::size_t grid_index(std::size_t a) const noexcept { return map_[a]; }
  std::span<const std::size_t> grid_indices() const noexcept { return map_; }

  bool is_active(std::size_t flat) const noexcept;

  /// Copy active values out of u, applying the weights.
  void pack(const GridFunction& u, std::span<double> y) const;
  /// Write y into the active points of u. Inactive points are untouched.
  void scatter(std::span<const double> y, GridFunction& u) const;

 private:
  StructuredGrid grid_;
  BoundaryConditionSpec bc_;
  std::array<int, 3> first_{0, 0, 0};
  std::array<int, 3> last_{0, 0, 0};
  std::size_t size_ = 0;
  std::vector<std::size_t> map_;
  std::vector<double> sqrt_weight_;
};

std::vector<double> pack_active(const GridFunction& u, const ActiveLayout& layout);

/// Active vector to grid function: interior from y, then boundary/ghost fill.
/// Throws DimensionError when y.size() != layout.size().
GridFunction unpack_active(std::span<const double> y, const ActiveLayout& layout);
void unpack_active(std::span<const double> y, const ActiveLayout& layout, GridFunction& out);

}  // namespace eigenwave
