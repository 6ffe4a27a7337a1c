#pragma once

#include <array>
#include <string>

namespace eigenwave {

class GridFunction;

enum class BoundaryKind { Dirichlet, Neumann };

/// Homogeneous boundary conditions per face plus the (constant) wave speed.
struct BoundaryConditionSpec {
  /// faces[axis][0] is the low face, faces[axis][1] the high face.
  std::array<std::array<BoundaryKind, 2>, 3> faces{};
  double wave_speed = 1.0;

  static BoundaryConditionSpec all(BoundaryKind kind, double wave_speed = 1.0) {
    BoundaryConditionSpec bc;
    for (auto& axis : bc.faces) axis = {kind, kind};
    bc.wave_speed = wave_speed;
    return bc;
  }
  static BoundaryConditionSpec dirichlet(double wave_speed = 1.0) {
    return all(BoundaryKind::Dirichlet, wave_speed);
  }
  static BoundaryConditionSpec neumann(double wave_speed = 1.0) {
    return all(BoundaryKind::Neumann, wave_speed);
  }

  BoundaryKind face(int axis, int side) const { return faces[axis][side]; }
  bool all_dirichlet() const;

  /// Throws ConfigError when the wave speed is not positive.
  void validate() const;
};

BoundaryKind parse_boundary_kind(const std::string& name);
const char* to_string(BoundaryKind kind);

/// Fill boundary and ghost values from the interior.
///
/// Dirichlet faces get a zero boundary value and odd extension through the
/// boundary point, u(-k) = -u(k). Neumann faces get even extension,
/// u(-k) = u(k), with the boundary value left as an unknown. Axes are
/// processed in order over the full index range of the others, which fills
/// edges and corners consistently.
void fill_ghost(GridFunction& u, const BoundaryConditionSpec& bc);

}  // namespace eigenwave
