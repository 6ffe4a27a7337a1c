#include "eigenwave/laplacian.hpp"

#include <cmath>
#include <string>

#include "eigenwave/errors.hpp"

namespace eigenwave {

DiscreteLaplacian::DiscreteLaplacian(const StructuredGrid& grid, int order,
                                     const BoundaryConditionSpec& bc)
    : order_(order) {
  if (order != 2 && order != 4)
    throw ConfigError("laplacian: order must be 2 or 4, got " + std::to_string(order));
  if (grid.ghost_width() < order / 2)
    throw ConfigError("laplacian: order " + std::to_string(order) + " needs ghost width " +
                      std::to_string(order / 2));
  bc.validate();
  layout_ = ActiveLayout(grid, bc);
}

bool DiscreteLaplacian::symmetric() const noexcept {
  if (order_ == 2) return true;
  for (int d = 0; d < grid().dim(); ++d)
    if (bc().face(d, 0) == BoundaryKind::Neumann || bc().face(d, 1) == BoundaryKind::Neumann)
      return false;
  return true;
}

double DiscreteLaplacian::max_symbol() const noexcept {
  const double per = order_ == 2 ? 4.0 : 16.0 / 3.0;
  double s = 0.0;
  for (int d = 0; d < grid().dim(); ++d) s += per / (grid().spacing(d) * grid().spacing(d));
  return wave_speed() * wave_speed() * s;
}

void DiscreteLaplacian::apply_to_active(const GridFunction& u, std::span<double> y) const {
  const StructuredGrid& g = grid();
  const auto v = u.values();
  const int dim = g.dim();
  const double c2 = wave_speed() * wave_speed();
  std::array<double, 3> w{};
  std::array<std::ptrdiff_t, 3> s{};
  for (int d = 0; d < 3; ++d) {
    s[d] = g.stride(d);
    const double h2 = g.spacing(d) * g.spacing(d);
    w[d] = d < dim ? c2 / (order_ == 2 ? h2 : 12.0 * h2) : 0.0;
  }
  const ActiveLayout& lay = layout_;
  const bool weighted = lay.weighted();
  std::size_t a = 0;
  for (int k = lay.first(2); k <= lay.last(2); ++k)
    for (int j = lay.first(1); j <= lay.last(1); ++j) {
      std::size_t p = g.index(lay.first(0), j, k);
      for (int i = lay.first(0); i <= lay.last(0); ++i, ++p, ++a) {
        const double c = v[p];
        double r = 0.0;
        if (order_ == 2) {
          for (int d = 0; d < dim; ++d) r += w[d] * (v[p - s[d]] - 2.0 * c + v[p + s[d]]);
        } else {
          for (int d = 0; d < dim; ++d) {
            const std::ptrdiff_t sd = s[d];
            r += w[d] * (-v[p - 2 * sd] + 16.0 * v[p - sd] - 30.0 * c + 16.0 * v[p + sd] -
                         v[p + 2 * sd]);
          }
        }
        y[a] = weighted ? lay.sqrt_weight(a) * r : r;
      }
    }
}

void DiscreteLaplacian::apply(const GridFunction& u, GridFunction& v) const {
  if (u.size() != grid().num_points()) throw DimensionError("laplacian: grid function size mismatch");
  if (v.size() != u.size()) v = GridFunction(grid());
  std::vector<double> y(active_size());
  apply_to_active(u, y);
  std::fill(v.values().begin(), v.values().end(), 0.0);
  // Undo the packing weight: grid values are unweighted.
  auto out = v.values();
  for (std::size_t a = 0; a < y.size(); ++a) out[layout_.grid_index(a)] = y[a] / layout_.sqrt_weight(a);
}

GridFunction DiscreteLaplacian::apply(const GridFunction& u) const {
  GridFunction v(grid());
  apply(u, v);
  return v;
}

void DiscreteLaplacian::apply_active(std::span<const double> x, std::span<double> y,
                                     GridFunction& scratch) const {
  if (x.size() != active_size() || y.size() != active_size())
    throw DimensionError("laplacian: active vector length mismatch");
  unpack_active(x, layout_, scratch);
  apply_to_active(scratch, y);
}

void DiscreteLaplacian::apply_active(std::span<const double> x, std::span<double> y) const {
  GridFunction scratch(grid());
  apply_active(x, y, scratch);
}

DenseMatrix assemble_dense(const DiscreteLaplacian& L, std::size_t cap) {
  const std::size_t n = L.active_size();
  if (n > cap)
    throw ResourceError("assemble_dense: " + std::to_string(n) + " unknowns exceed cap " +
                        std::to_string(cap));
  DenseMatrix a(n, n);
  std::vector<double> e(n, 0.0);
  GridFunction scratch(L.grid());
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    L.apply_active(e, a.col(j), scratch);
    e[j] = 0.0;
  }
  return a;
}

double stencil_symbol(int order, double theta, double h) {
  if (order == 2) {
    const double s = std::sin(0.5 * theta);
    return 4.0 * s * s / (h * h);
  }
  return (30.0 - 32.0 * std::cos(theta) + 2.0 * std::cos(2.0 * theta)) / (12.0 * h * h);
}

}  // namespace eigenwave
