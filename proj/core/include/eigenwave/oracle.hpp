#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "eigenwave/dense.hpp"
#include "eigenwave/grid.hpp"
#include "eigenwave/laplacian.hpp"

namespace eigenwave {

enum class ReferenceKind { AnalyticContinuous, AnalyticDiscrete, Dense };

const char* to_string(ReferenceKind kind);

struct Cluster {
  std::size_t first = 0;
  std::size_t count = 0;
  double lambda = 0.0;  // mean of members
};

/// Sorted ascending; clusters group (near-)degenerate members.
struct ReferenceSpectrum {
  ReferenceKind kind = ReferenceKind::AnalyticDiscrete;
  std::vector<double> lambda;
  /// Per-axis mode numbers (analytic kinds).
  std::vector<std::array<int, 3>> modes;
  /// Unit active vectors, orthonormal within each cluster (empty if not built).
  std::vector<std::vector<double>> vectors;
  std::vector<Cluster> clusters;
  /// cluster index of each member
  std::vector<std::size_t> cluster_of;

  std::size_t size() const noexcept { return lambda.size(); }
  bool has_vectors() const noexcept { return !vectors.empty(); }
  /// Index of the member closest to x (ties go to the lower index).
  std::size_t nearest(double x) const;
  /// Orthonormal basis (n x mult) of a cluster.
  DenseMatrix basis(std::size_t cluster) const;
};

/// Greedy chain clustering of a sorted list: neighbours join when their gap
/// is at most rel_tol * lambda.
std::vector<Cluster> cluster_multiplicities(std::span<const double> lambdas, double rel_tol = 1e-8);

/// Separation-of-variables spectrum of c^2 Lap on a box up to lambda_max.
/// Per axis: Dirichlet-Dirichlet has sin(m pi x / l), m >= 1; Neumann-
/// Neumann cos(m pi x / l), m >= 0; mixed faces quarter-wave modes.
ReferenceSpectrum analytic_continuous_box(int dim, std::span<const AxisExtent> extents,
                                          const BoundaryConditionSpec& bc, double lambda_max,
                                          double cluster_tol = 1e-8);

/// Exact eigenpairs of the discrete operator from the stencil symbol; the
/// box extensions make sampled sine/cosine products exact eigenvectors.
/// Vectors are built for members with lambda <= lambda_max when requested.
ReferenceSpectrum analytic_discrete_box(const DiscreteLaplacian& L, double lambda_max,
                                        bool with_vectors = true, double cluster_tol = 1e-8);

/// assemble_dense + small_symmetric_eig. Throws InvariantError if L has a
/// positive eigenvalue beyond 1e-10 relative, ConfigError if L is not symmetric.
ReferenceSpectrum dense_reference(const DiscreteLaplacian& L, std::size_t cap = 5000,
                                  double cluster_tol = 1e-8);

/// ||v - W W^T v||_inf. Throws DomainError for an empty basis.
double eigenspace_distance(std::span<const double> v, const DenseMatrix& W);

/// CSV with columns k,lambda,mult (one row per member, 1-based k).
void write_reference_csv(std::ostream& os, const ReferenceSpectrum& ref);

}  // namespace eigenwave
