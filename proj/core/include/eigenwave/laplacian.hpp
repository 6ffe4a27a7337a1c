#pragma once

#include <cstddef>
#include <span>

#include "eigenwave/boundary.hpp"
#include "eigenwave/dense.hpp"
#include "eigenwave/grid.hpp"

namespace eigenwave {

/// Matrix-free c^2 * Laplacian with order-2 or order-4 central stencils.
///
/// Grid-function application reads ghosts as given; the active-vector path
/// unpacks, fills ghosts and applies in one call. Active vectors use the
/// weighted packing of ActiveLayout, so the active operator is symmetric for
/// Dirichlet faces at both orders and for Neumann faces at order 2.
class DiscreteLaplacian {
 public:
  DiscreteLaplacian() = default;
  /// Throws ConfigError for order outside {2,4} or ghost width < order/2.
  DiscreteLaplacian(const StructuredGrid& grid, int order, const BoundaryConditionSpec& bc);

  const StructuredGrid& grid() const noexcept { return layout_.grid(); }
  const BoundaryConditionSpec& bc() const noexcept { return layout_.bc(); }
  const ActiveLayout& layout() const noexcept { return layout_; }
  int order() const noexcept { return order_; }
  double wave_speed() const noexcept { return layout_.bc().wave_speed; }
  std::size_t active_size() const noexcept { return layout_.size(); }

  /// False for order 4 with any Neumann face: even extension of the wide
  /// stencil is not symmetrizable by a diagonal weight.
  bool symmetric() const noexcept;

  /// v = L u on active points, zero elsewhere. Ghosts of u must be filled.
  void apply(const GridFunction& u, GridFunction& v) const;
  GridFunction apply(const GridFunction& u) const;

  /// y = pack(L unpack(x)). scratch is resized to the grid if needed.
  void apply_active(std::span<const double> x, std::span<double> y, GridFunction& scratch) const;
  void apply_active(std::span<const double> x, std::span<double> y) const;

  /// Largest eigenvalue of -L bound from the stencil symbol: c^2 sum_d 4/h_d^2
  /// (order 2) or c^2 sum_d 16/(3 h_d^2) (order 4).
  double max_symbol() const noexcept;

 private:
  // y[a] = sqrt_w(a) * (L u)(a) over the active box.
  void apply_to_active(const GridFunction& u, std::span<double> y) const;

  ActiveLayout layout_;
  int order_ = 2;
};

/// Dense matrix of the active operator, column j = apply_active(e_j).
/// Throws ResourceError when the active count exceeds cap.
DenseMatrix assemble_dense(const DiscreteLaplacian& L, std::size_t cap = 5000);

/// Per-axis symbol of -D2 at angle theta = m*pi*h/length.
double stencil_symbol(int order, double theta, double h);

}  // namespace eigenwave
