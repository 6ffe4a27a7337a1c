#include "eigenwave/boundary.hpp"

#include <algorithm>
#include <cctype>

#include "eigenwave/errors.hpp"
#include "eigenwave/grid.hpp"

namespace eigenwave {

bool BoundaryConditionSpec::all_dirichlet() const {
  for (const auto& axis : faces)
    for (BoundaryKind k : axis)
      if (k != BoundaryKind::Dirichlet) return false;
  return true;
}

void BoundaryConditionSpec::validate() const {
  if (!(wave_speed > 0.0)) throw ConfigError("boundary: wave speed must be positive");
}

BoundaryKind parse_boundary_kind(const std::string& name) {
  std::string s = name;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "dirichlet") return BoundaryKind::Dirichlet;
  if (s == "neumann") return BoundaryKind::Neumann;
  throw ConfigError("unknown boundary kind '" + name + "'");
}

const char* to_string(BoundaryKind kind) {
  return kind == BoundaryKind::Dirichlet ? "dirichlet" : "neumann";
}

void fill_ghost(GridFunction& u, const BoundaryConditionSpec& bc) {
  const StructuredGrid& g = u.grid();
  if (g.dim() == 0) throw ConfigError("fill_ghost: grid function has no grid");
  auto v = u.values();
  const int gw = g.ghost_width();

  for (int d = 0; d < g.dim(); ++d) {
    const int n = g.cells(d);
    const std::ptrdiff_t s = g.stride(d);
    // Other two axes, over their full stored range.
    const int a = (d + 1) % 3, b = (d + 2) % 3;
    const int a_lo = -g.ghost(a), a_hi = g.stored(a) - g.ghost(a);
    const int b_lo = -g.ghost(b), b_hi = g.stored(b) - g.ghost(b);
    for (int jb = b_lo; jb < b_hi; ++jb)
      for (int ja = a_lo; ja < a_hi; ++ja) {
        std::array<int, 3> idx{};
        idx[d] = 0;
        idx[a] = ja;
        idx[b] = jb;
        const std::size_t lo = g.index(idx[0], idx[1], idx[2]);
        const std::size_t hi = lo + static_cast<std::size_t>(n * s);
        const double sign_lo = bc.face(d, 0) == BoundaryKind::Dirichlet ? -1.0 : 1.0;
        const double sign_hi = bc.face(d, 1) == BoundaryKind::Dirichlet ? -1.0 : 1.0;
        if (sign_lo < 0) v[lo] = 0.0;
        if (sign_hi < 0) v[hi] = 0.0;
        for (int k = 1; k <= gw; ++k) {
          v[lo - k * s] = sign_lo * v[lo + k * s];
          v[hi + k * s] = sign_hi * v[hi - k * s];
        }
      }
  }
}

}  // namespace eigenwave
