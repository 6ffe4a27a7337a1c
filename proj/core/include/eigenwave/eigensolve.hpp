#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "eigenwave/dense.hpp"
#include "eigenwave/laplacian.hpp"
#include "eigenwave/operator.hpp"

namespace eigenwave {

/// SplitMix64 generator; fixed seed gives a fixed stream on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  /// Uniform in (-1, 1).
  double uniform() noexcept {
    const double u = double((next() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    return 2.0 * u - 1.0 - 0x1.0p-54;
  }
  void fill(std::span<double> v) noexcept {
    for (double& x : v) x = uniform();
  }

 private:
  std::uint64_t state_;
};

struct SymmetricEigen {
  std::vector<double> values;  // ascending
  DenseMatrix vectors;         // column j pairs with values[j]
};

/// All eigenpairs of a dense symmetric matrix (Householder tridiagonalization
/// followed by implicit-shift QL). Throws DomainError when the asymmetry
/// exceeds sym_tol * max|A_ij|.
SymmetricEigen small_symmetric_eig(const DenseMatrix& a, double sym_tol = 1e-8,
                                   std::size_t cap = 5000);

/// lambda = sqrt(-<phi, L phi> / <phi, phi>); tiny negative radicands clamp
/// to zero, larger ones throw DomainError.
double rayleigh_lambda(const DiscreteLaplacian& L, std::span<const double> phi);

struct EigenPair {
  double beta = 0.0;
  double lambda = 0.0;
  /// Ritz estimate of ||S v - beta v||_2 at acceptance.
  double residual = 0.0;
  std::vector<double> vector;  // unit 2-norm
};

struct EigenSolveResult {
  std::vector<EigenPair> pairs;  // descending |beta|
  std::int64_t applies = 0;
  int iterations = 0;  // restarts, sweeps or power steps
  int reseeds = 0;
  bool converged = false;
  std::string diagnostic;
  /// Per-iteration residual of the tracked pair (SI: the N_r-th; power: the only one).
  std::vector<double> residual_history;

  std::size_t num_converged() const noexcept { return pairs.size(); }
};

/// Power iteration. Stops when |beta_k - beta_{k-1}| <= tol |beta_k| or the
/// residual ||S v - beta v|| <= tol |beta|. Throws NonconvergenceError
/// after max_iters with the beta history in the message.
EigenSolveResult power_iteration(LinearOperator& op, std::span<const double> v0, double tol,
                                 int max_iters, const DiscreteLaplacian* L = nullptr);

/// S V = V H + f b^T with orthonormal V and f orthogonal to V.
///
/// b = e_m after every expansion; a restart leaves a general b that the next
/// expansion folds into row m of H.
struct ArnoldiFactorization {
  DenseMatrix V;  // n x capacity
  DenseMatrix H;  // capacity x capacity
  std::vector<double> f;
  std::vector<double> b;  // empty means e_m
  int m = 0;
  /// Set when the last expansion hit an invariant subspace.
  bool breakdown = false;

  ArnoldiFactorization() = default;
  ArnoldiFactorization(std::size_t n, int capacity, std::span<const double> start);

  int capacity() const noexcept { return static_cast<int>(H.cols()); }
  double f_norm() const { return norm2(f); }
  /// max |V^T V - I|
  double orthogonality_error() const;
  /// max |H - H^T| over the leading m x m block
  double asymmetry() const;
  /// ||S V - V H - f e_m^T||_max, recomputed with m fresh applies.
  double relation_error(LinearOperator& op) const;
};

/// Extends fact to size to_m by Gram-Schmidt with one re-orthogonalization
/// pass; new columns are also orthogonalized against `locked` (n x l, may be
/// empty). Invariant subspaces set fact.breakdown and stop early unless
/// `rng` is given, in which case a random orthogonal direction with zero
/// coupling continues the basis.
void arnoldi_expand(ArnoldiFactorization& fact, LinearOperator& op, int to_m,
                    const DenseMatrix* locked = nullptr, SplitMix64* rng = nullptr);

struct RestartOptions {
  int n_requested = 1;
  int n_arnoldi = 0;  // 0 means 2 N_r + 1
  double tol = 1e-12;
  int max_restarts = 200;
  std::uint64_t seed = 12345;
  /// Guard on max|H - H^T| relative to max|H|. Inexact linear solves make S
  /// slightly nonsymmetric, so callers loosen this with the solver tolerance.
  double symmetry_tol = 1e-8;
};

/// Implicitly restarted Arnoldi (exact shifts, thick form) with locking,
/// wanted set = largest |beta|. Returns the converged subset when the restart
/// budget runs out (converged = false).
EigenSolveResult implicit_restart_solve(LinearOperator& op, const RestartOptions& opt,
                                        const DiscreteLaplacian* L = nullptr);

struct SubspaceOptions {
  int n_requested = 1;
  int n_block = 0;  // 0 means 2 N_r + 1
  double tol = 1e-12;
  int max_sweeps = 500;
  std::uint64_t seed = 12345;
  double symmetry_tol = 1e-8;
};

/// Orthogonal iteration with Rayleigh-Ritz extraction.
EigenSolveResult simultaneous_iteration(LinearOperator& op, const SubspaceOptions& opt,
                                        const DiscreteLaplacian* L = nullptr);

/// Fresh ||S v - beta v||_2 for each pair (costs one apply per pair).
std::vector<double> verify_pairs(LinearOperator& op, const EigenSolveResult& result);

}  // namespace eigenwave
