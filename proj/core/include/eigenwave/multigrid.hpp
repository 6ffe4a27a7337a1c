#pragma once

#include <memory>
#include <span>
#include <vector>

#include "eigenwave/dense.hpp"
#include "eigenwave/grid.hpp"
#include "eigenwave/laplacian.hpp"

namespace eigenwave {

struct MultigridOptions {
  int pre_smooth = 2;
  int post_smooth = 1;
  /// Coarsening stops once every axis has at most this many cells.
  int coarsest_cells = 8;
};

/// Geometric hierarchy for M = I - shift * L with L the order-2 Laplacian.
///
/// Levels come from factor-2 coarsening with rediscretized operators. Smoothing
/// is red-black Gauss-Seidel, transfers are full weighting and multilinear
/// interpolation, and the coarsest level is solved densely. Everything works
/// on unweighted grid functions; the packed residual norm is the weighted one.
class MultigridHierarchy {
 public:
  /// True when the grid coarsens by factors of two down to coarsest_cells.
  static bool compatible(const StructuredGrid& grid, int coarsest_cells);

  /// Throws ConfigError for incompatible grids or order != 2.
  MultigridHierarchy(const DiscreteLaplacian& L, double shift, const MultigridOptions& opt = {});

  std::size_t levels() const noexcept { return levels_.size(); }
  const StructuredGrid& grid(std::size_t level) const { return levels_[level].L.grid(); }
  double shift() const noexcept { return shift_; }

  /// One V-cycle on the finest level: improves x for M x = b in place.
  void vcycle(const GridFunction& b, GridFunction& x);

  /// r = b - M x on active points (zero elsewhere, ghosts filled).
  void residual(std::size_t level, const GridFunction& b, GridFunction& x, GridFunction& r) const;

 private:
  struct Level {
    DiscreteLaplacian L;
    std::array<double, 3> w{};  // shift * c^2 / h_d^2
    double diag = 1.0;
    GridFunction b, x, r;
  };

  void cycle(std::size_t level);
  void smooth(std::size_t level, int sweeps);
  void restrict_residual(std::size_t fine);
  void prolong_add(std::size_t coarse);
  void coarse_solve();

  std::vector<Level> levels_;
  double shift_ = 0.0;
  MultigridOptions opt_;
  Cholesky coarse_;
};

}  // namespace eigenwave
