#include "eigenwave/multigrid.hpp"

#include <algorithm>
#include <string>

#include "eigenwave/errors.hpp"

namespace eigenwave {

namespace {

template <class F>
void for_active(const ActiveLayout& lay, F&& f) {
  const StructuredGrid& g = lay.grid();
  for (int k = lay.first(2); k <= lay.last(2); ++k)
    for (int j = lay.first(1); j <= lay.last(1); ++j) {
      std::size_t p = g.index(lay.first(0), j, k);
      for (int i = lay.first(0); i <= lay.last(0); ++i, ++p) f(i, j, k, p);
    }
}

}  // namespace

bool MultigridHierarchy::compatible(const StructuredGrid& grid, int coarsest_cells) {
  std::array<int, 3> n{grid.cells(0), grid.cells(1), grid.cells(2)};
  auto too_big = [&] {
    for (int d = 0; d < grid.dim(); ++d)
      if (n[d] > coarsest_cells) return true;
    return false;
  };
  while (too_big()) {
    for (int d = 0; d < grid.dim(); ++d) {
      if (n[d] % 2 != 0 || n[d] / 2 < 4) return false;
      n[d] /= 2;
    }
  }
  return true;
}

MultigridHierarchy::MultigridHierarchy(const DiscreteLaplacian& L, double shift,
                                       const MultigridOptions& opt)
    : shift_(shift), opt_(opt) {
  if (L.order() != 2) throw ConfigError("multigrid: only the order-2 operator is supported");
  if (!compatible(L.grid(), opt.coarsest_cells))
    throw ConfigError("multigrid: grid does not coarsen by factors of two");
  StructuredGrid g = L.grid();
  while (true) {
    Level lev;
    lev.L = DiscreteLaplacian(g, 2, L.bc());
    const double c2 = L.wave_speed() * L.wave_speed();
    lev.diag = 1.0;
    for (int d = 0; d < g.dim(); ++d) {
      lev.w[d] = shift * c2 / (g.spacing(d) * g.spacing(d));
      lev.diag += 2.0 * lev.w[d];
    }
    lev.b = GridFunction(g);
    lev.x = GridFunction(g);
    lev.r = GridFunction(g);
    levels_.push_back(std::move(lev));
    bool more = false;
    for (int d = 0; d < g.dim(); ++d)
      if (g.cells(d) > opt.coarsest_cells) more = true;
    if (!more) break;
    g = g.coarsened();
  }
  // Coarsest level: dense Cholesky of the weighted (symmetric) matrix.
  const Level& c = levels_.back();
  DenseMatrix m = assemble_dense(c.L);
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, j) = (i == j ? 1.0 : 0.0) - shift * m(i, j);
  coarse_ = Cholesky(std::move(m));
}

void MultigridHierarchy::residual(std::size_t level, const GridFunction& b, GridFunction& x,
                                  GridFunction& r) const {
  const Level& lev = levels_[level];
  const ActiveLayout& lay = lev.L.layout();
  const StructuredGrid& g = lay.grid();
  fill_ghost(x, lay.bc());
  const auto xv = x.values();
  const auto bv = b.values();
  auto rv = r.values();
  std::fill(rv.begin(), rv.end(), 0.0);
  const int dim = g.dim();
  for_active(lay, [&](int, int, int, std::size_t p) {
    double acc = bv[p] - lev.diag * xv[p];
    for (int d = 0; d < dim; ++d) acc += lev.w[d] * (xv[p - g.stride(d)] + xv[p + g.stride(d)]);
    rv[p] = acc;
  });
  fill_ghost(r, lay.bc());
}

void MultigridHierarchy::smooth(std::size_t level, int sweeps) {
  Level& lev = levels_[level];
  const ActiveLayout& lay = lev.L.layout();
  const StructuredGrid& g = lay.grid();
  const int dim = g.dim();
  const double inv = 1.0 / lev.diag;
  auto xv = lev.x.values();
  const auto bv = lev.b.values();
  for (int s = 0; s < sweeps; ++s)
    for (int colour = 0; colour < 2; ++colour) {
      for (int k = lay.first(2); k <= lay.last(2); ++k)
        for (int j = lay.first(1); j <= lay.last(1); ++j) {
          int i0 = lay.first(0);
          if (((i0 + j + k) & 1) != colour) ++i0;
          for (int i = i0; i <= lay.last(0); i += 2) {
            const std::size_t p = g.index(i, j, k);
            double acc = bv[p];
            for (int d = 0; d < dim; ++d)
              acc += lev.w[d] * (xv[p - g.stride(d)] + xv[p + g.stride(d)]);
            xv[p] = acc * inv;
          }
        }
      fill_ghost(lev.x, lay.bc());
    }
}

void MultigridHierarchy::restrict_residual(std::size_t fine) {
  const Level& f = levels_[fine];
  Level& c = levels_[fine + 1];
  const StructuredGrid& fg = f.L.grid();
  const int dim = fg.dim();
  const auto rv = f.r.values();
  auto bv = c.b.values();
  std::fill(bv.begin(), bv.end(), 0.0);
  static constexpr double wt[3] = {0.25, 0.5, 0.25};
  for_active(c.L.layout(), [&](int i, int j, int k, std::size_t p) {
    const std::size_t centre = fg.index(2 * i, dim > 1 ? 2 * j : 0, dim > 2 ? 2 * k : 0);
    const int oz = dim > 2 ? 1 : 0, oy = dim > 1 ? 1 : 0;
    double acc = 0.0;
    for (int dz = -oz; dz <= oz; ++dz)
      for (int dy = -oy; dy <= oy; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          const double w = wt[dx + 1] * (oy ? wt[dy + 1] : 1.0) * (oz ? wt[dz + 1] : 1.0);
          acc += w * rv[centre + dx * fg.stride(0) + dy * fg.stride(1) + dz * fg.stride(2)];
        }
    bv[p] = acc;
  });
}

void MultigridHierarchy::prolong_add(std::size_t coarse) {
  Level& c = levels_[coarse];
  Level& f = levels_[coarse - 1];
  fill_ghost(c.x, c.L.bc());
  const StructuredGrid& cg = c.L.grid();
  const StructuredGrid& fg = f.L.grid();
  const ActiveLayout& lay = f.L.layout();
  const int dim = cg.dim();
  const double* cx = c.x.values().data();
  double* fx = f.x.values().data();
  // Row by row: the coarse rows touched by a fine row are fixed, so only the
  // x parity varies in the inner loop.
  for (int k = lay.first(2); k <= lay.last(2); ++k) {
    const int k0 = dim > 2 ? k >> 1 : 0, k1 = dim > 2 ? k0 + (k & 1) : 0;
    for (int j = lay.first(1); j <= lay.last(1); ++j) {
      const int j0 = dim > 1 ? j >> 1 : 0, j1 = dim > 1 ? j0 + (j & 1) : 0;
      const double* rows[4] = {cx + cg.index(0, j0, k0), cx + cg.index(0, j1, k0),
                               cx + cg.index(0, j0, k1), cx + cg.index(0, j1, k1)};
      const int nrows = (j1 != j0 ? 2 : 1) * (k1 != k0 ? 2 : 1);
      const double* r[4];
      int q = 0;
      for (int kk = 0; kk < (k1 != k0 ? 2 : 1); ++kk)
        for (int jj = 0; jj < (j1 != j0 ? 2 : 1); ++jj) r[q++] = rows[2 * kk + jj];
      const double wrow = 1.0 / nrows;
      double* out = fx + fg.index(0, j, k);
      for (int i = lay.first(0); i <= lay.last(0); ++i) {
        const int i0 = i >> 1;
        double acc = 0.0;
        if (i & 1) {
          for (int t = 0; t < nrows; ++t) acc += r[t][i0] + r[t][i0 + 1];
          out[i] += 0.5 * wrow * acc;
        } else {
          for (int t = 0; t < nrows; ++t) acc += r[t][i0];
          out[i] += wrow * acc;
        }
      }
    }
  }
  fill_ghost(f.x, f.L.bc());
}

void MultigridHierarchy::coarse_solve() {
  Level& c = levels_.back();
  const ActiveLayout& lay = c.L.layout();
  std::vector<double> y = pack_active(c.b, lay);
  coarse_.solve_in_place(y);
  unpack_active(y, lay, c.x);
}

void MultigridHierarchy::cycle(std::size_t level) {
  if (level + 1 == levels_.size()) {
    coarse_solve();
    return;
  }
  Level& lev = levels_[level];
  smooth(level, opt_.pre_smooth);
  residual(level, lev.b, lev.x, lev.r);
  restrict_residual(level);
  Level& next = levels_[level + 1];
  std::fill(next.x.values().begin(), next.x.values().end(), 0.0);
  cycle(level + 1);
  prolong_add(level + 1);
  smooth(level, opt_.post_smooth);
}

void MultigridHierarchy::vcycle(const GridFunction& b, GridFunction& x) {
  Level& top = levels_.front();
  if (b.size() != top.b.size() || x.size() != top.x.size())
    throw DimensionError("multigrid: grid function size mismatch");
  std::copy(b.values().begin(), b.values().end(), top.b.values().begin());
  std::copy(x.values().begin(), x.values().end(), top.x.values().begin());
  fill_ghost(top.x, top.L.bc());
  cycle(0);
  std::copy(top.x.values().begin(), top.x.values().end(), x.values().begin());
}

}  // namespace eigenwave
