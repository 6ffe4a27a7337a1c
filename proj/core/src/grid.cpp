#include "eigenwave/grid.hpp"

#include <cmath>
#include <string>

#include "eigenwave/errors.hpp"

namespace eigenwave {

StructuredGrid::StructuredGrid(int dim, std::span<const AxisExtent> extents,
                               std::span<const int> n_cells, int ghost_width)
    : dim_(dim), ghost_width_(ghost_width) {
  if (dim < 1 || dim > 3) throw ConfigError("grid: dimension must be 1, 2 or 3");
  if (extents.size() < static_cast<std::size_t>(dim) ||
      n_cells.size() < static_cast<std::size_t>(dim))
    throw ConfigError("grid: need one extent and one cell count per axis");
  if (ghost_width != 1 && ghost_width != 2) throw ConfigError("grid: ghost width must be 1 or 2");
  for (int d = 0; d < dim; ++d) {
    if (!(extents[d].hi > extents[d].lo) || !std::isfinite(extents[d].hi - extents[d].lo))
      throw ConfigError("grid: degenerate extent on axis " + std::to_string(d));
    if (n_cells[d] < 4)
      throw ConfigError("grid: axis " + std::to_string(d) + " needs at least 4 cells, got " +
                        std::to_string(n_cells[d]));
    extents_[d] = extents[d];
    cells_[d] = n_cells[d];
  }
  finalize();
}

void StructuredGrid::finalize() {
  std::ptrdiff_t stride = 1;
  num_points_ = 1;
  for (int d = 0; d < 3; ++d) {
    if (d < dim_) {
      spacing_[d] = (extents_[d].hi - extents_[d].lo) / cells_[d];
      stored_[d] = cells_[d] + 1 + 2 * ghost_width_;
    } else {
      extents_[d] = {0.0, 0.0};
      cells_[d] = 0;
      spacing_[d] = 1.0;
      stored_[d] = 1;
    }
    strides_[d] = stride;
    stride *= stored_[d];
    num_points_ *= static_cast<std::size_t>(stored_[d]);
  }
}

std::array<int, 3> StructuredGrid::multi_index(std::size_t flat) const noexcept {
  std::array<int, 3> idx{};
  auto rest = static_cast<std::ptrdiff_t>(flat);
  for (int d = 2; d >= 0; --d) {
    idx[d] = static_cast<int>(rest / strides_[d]) - ghost(d);
    rest %= strides_[d];
  }
  return idx;
}

double StructuredGrid::coordinate(int axis, int i) const noexcept {
  if (i == cells_[axis]) return extents_[axis].hi;
  return extents_[axis].lo + i * spacing_[axis];
}

PointKind StructuredGrid::classify(std::size_t flat) const noexcept {
  const auto idx = multi_index(flat);
  bool on_boundary = false;
  for (int d = 0; d < dim_; ++d) {
    if (idx[d] < 0 || idx[d] > cells_[d]) return PointKind::Ghost;
    if (idx[d] == 0 || idx[d] == cells_[d]) on_boundary = true;
  }
  return on_boundary ? PointKind::Boundary : PointKind::Interior;
}

StructuredGrid StructuredGrid::with_ghost_width(int ghost_width) const {
  std::array<int, 3> cells = cells_;
  return StructuredGrid(dim_, std::span(extents_).first(dim_), std::span(cells).first(dim_),
                        ghost_width);
}

StructuredGrid StructuredGrid::coarsened() const {
  std::array<int, 3> cells{};
  for (int d = 0; d < dim_; ++d) {
    if (cells_[d] % 2 != 0) throw ConfigError("grid: cannot coarsen an odd cell count");
    cells[d] = cells_[d] / 2;
  }
  StructuredGrid g = *this;
  for (int d = 0; d < dim_; ++d) g.cells_[d] = cells[d];
  g.finalize();
  return g;
}

StructuredGrid build_grid(int dim, std::span<const AxisExtent> extents, std::span<const int> n_cells,
                          int ghost_width) {
  return StructuredGrid(dim, extents, n_cells, ghost_width);
}

ActiveLayout::ActiveLayout(const StructuredGrid& grid, const BoundaryConditionSpec& bc)
    : grid_(grid), bc_(bc) {
  for (int d = 0; d < 3; ++d) {
    if (d < grid.dim()) {
      first_[d] = bc.face(d, 0) == BoundaryKind::Dirichlet ? 1 : 0;
      last_[d] = bc.face(d, 1) == BoundaryKind::Dirichlet ? grid.cells(d) - 1 : grid.cells(d);
    } else {
      first_[d] = last_[d] = 0;
    }
  }
  size_ = static_cast<std::size_t>(count(0)) * count(1) * count(2);
  map_.reserve(size_);
  bool weighted = false;
  std::vector<double> w;
  w.reserve(size_);
  for (int k = first_[2]; k <= last_[2]; ++k)
    for (int j = first_[1]; j <= last_[1]; ++j)
      for (int i = first_[0]; i <= last_[0]; ++i) {
        map_.push_back(grid.index(i, j, k));
        const std::array<int, 3> idx{i, j, k};
        double weight = 1.0;
        for (int d = 0; d < grid.dim(); ++d)
          if (idx[d] == 0 || idx[d] == grid.cells(d)) weight *= 0.5;
        if (weight != 1.0) weighted = true;
        w.push_back(std::sqrt(weight));
      }
  if (weighted) sqrt_weight_ = std::move(w);
}

bool ActiveLayout::is_active(std::size_t flat) const noexcept {
  const auto idx = grid_.multi_index(flat);
  for (int d = 0; d < 3; ++d)
    if (idx[d] < first_[d] || idx[d] > last_[d]) return false;
  return true;
}

void ActiveLayout::pack(const GridFunction& u, std::span<double> y) const {
  if (y.size() != size_) throw DimensionError("pack: output length does not match active count");
  const auto v = u.values();
  if (sqrt_weight_.empty()) {
    for (std::size_t a = 0; a < size_; ++a) y[a] = v[map_[a]];
  } else {
    for (std::size_t a = 0; a < size_; ++a) y[a] = sqrt_weight_[a] * v[map_[a]];
  }
}

void ActiveLayout::scatter(std::span<const double> y, GridFunction& u) const {
  if (y.size() != size_)
    throw DimensionError("unpack: vector length " + std::to_string(y.size()) +
                         " does not match active count " + std::to_string(size_));
  auto v = u.values();
  if (sqrt_weight_.empty()) {
    for (std::size_t a = 0; a < size_; ++a) v[map_[a]] = y[a];
  } else {
    for (std::size_t a = 0; a < size_; ++a) v[map_[a]] = y[a] / sqrt_weight_[a];
  }
}

std::vector<double> pack_active(const GridFunction& u, const ActiveLayout& layout) {
  std::vector<double> y(layout.size());
  layout.pack(u, y);
  return y;
}

void unpack_active(std::span<const double> y, const ActiveLayout& layout, GridFunction& out) {
  if (out.size() != layout.grid().num_points()) out = GridFunction(layout.grid());
  layout.scatter(y, out);
  fill_ghost(out, layout.bc());
}

GridFunction unpack_active(std::span<const double> y, const ActiveLayout& layout) {
  GridFunction u(layout.grid());
  unpack_active(y, layout, u);
  return u;
}

}  // namespace eigenwave
