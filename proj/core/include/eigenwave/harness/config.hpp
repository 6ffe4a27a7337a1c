#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>

#include "eigenwave/boundary.hpp"
#include "eigenwave/filter.hpp"
#include "eigenwave/grid.hpp"
#include "eigenwave/wavesolve.hpp"

namespace eigenwave {

enum class GeometryKind { Interval, Square, Box };
enum class EigensolverKind { Arnoldi, Subspace, Power };
enum class OracleKind { Analytic, Dense };

const char* to_string(GeometryKind kind);
const char* to_string(EigensolverKind kind);
const char* to_string(OracleKind kind);

/// Every knob of one experiment. Defaults follow the documented schema.
struct RunConfig {
  GeometryKind geometry = GeometryKind::Square;
  std::array<AxisExtent, 3> extents{};
  std::array<int, 3> n_cells{0, 0, 0};
  int order = 2;
  BoundaryConditionSpec bc = BoundaryConditionSpec::dirichlet();

  double omega = 0.0;
  int n_periods = 1;
  bool adjust_omega = false;

  SchemeKind scheme = SchemeKind::Implicit;
  int n_its = 10;
  double cfl = 0.9;

  LinearSolverSpec solver{};

  EigensolverKind eigensolver = EigensolverKind::Arnoldi;
  int n_requested = 0;
  int n_arnoldi = 0;  // 0 means 2 N_r + 1
  double tol = 1e-12;
  int max_restarts = 200;
  std::uint64_t seed = 12345;

  OracleKind oracle = OracleKind::Analytic;
  double cluster_tol = 1e-8;

  std::string out_dir = ".";

  int dim() const noexcept;
  /// Grid with ghost width order/2.
  StructuredGrid grid() const;
  /// The running target: omega, or its adjusted value when adjust_omega is set.
  double filter_omega() const;

  /// Cross-field constraints. Throws ConfigError naming the offending key.
  void validate() const;
};

/// Parses the INI-style schema documented in README. Errors carry the
/// source name and line number.
RunConfig parse_config(std::istream& in, const std::string& source = "<input>");
RunConfig parse_config_file(const std::string& path);

/// Convenience for programmatic use: square/box/interval on [0,1]^dim.
RunConfig make_box_config(int dim, int n, double omega, int n_requested, int order = 2);

}  // namespace eigenwave
