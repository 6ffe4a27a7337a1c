#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "eigenwave/eigensolve.hpp"
#include "eigenwave/grid.hpp"
#include "eigenwave/laplacian.hpp"
#include "eigenwave/oracle.hpp"

namespace ewtest {

using namespace eigenwave;

inline StructuredGrid unit_box(int dim, int n, int ghost = 1) {
  std::array<AxisExtent, 3> ext{};
  std::array<int, 3> cells{n, n, n};
  return StructuredGrid(dim, std::span(ext.data(), dim), std::span(cells.data(), dim), ghost);
}

inline DiscreteLaplacian box_laplacian(int dim, int n, int order = 2,
                                       BoundaryConditionSpec bc = BoundaryConditionSpec::dirichlet()) {
  return DiscreteLaplacian(unit_box(dim, n, order / 2), order, bc);
}

inline std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
  std::vector<double> v(n);
  SplitMix64 rng(seed);
  rng.fill(v);
  return v;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Sampled sine product on the active points of a Dirichlet box, unnormalized.
inline std::vector<double> sine_mode(const ActiveLayout& lay, std::array<int, 3> m) {
  const StructuredGrid& g = lay.grid();
  std::vector<double> v(lay.size());
  std::size_t a = 0;
  for (int k = lay.first(2); k <= lay.last(2); ++k)
    for (int j = lay.first(1); j <= lay.last(1); ++j)
      for (int i = lay.first(0); i <= lay.last(0); ++i, ++a) {
        const std::array<int, 3> idx{i, j, k};
        double val = 1.0;
        for (int d = 0; d < g.dim(); ++d) val *= std::sin(m[d] * M_PI * idx[d] / g.cells(d));
        v[a] = val;
      }
  return v;
}

}  // namespace ewtest
