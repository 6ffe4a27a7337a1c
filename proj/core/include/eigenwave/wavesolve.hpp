#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "eigenwave/dense.hpp"
#include "eigenwave/filter.hpp"
#include "eigenwave/laplacian.hpp"
#include "eigenwave/multigrid.hpp"

namespace eigenwave {

/// cfl * 2 / sqrt(max_symbol). Throws ConfigError unless 0 < cfl <= 1.
double stable_dt_explicit(const DiscreteLaplacian& L, double cfl);

enum class SolverKind { DirectDense, ConjugateGradient, Multigrid };

SolverKind parse_solver_kind(const std::string& name);
const char* to_string(SolverKind kind);

struct LinearSolverSpec {
  SolverKind kind = SolverKind::ConjugateGradient;
  double tolerance = 1e-10;
  int max_iterations = 1000;
  /// Diagonal preconditioning for CG.
  bool jacobi = false;
  MultigridOptions multigrid{};
  std::size_t dense_cap = 5000;

  /// Throws ConfigError for tolerance <= 0 or max_iterations < 1.
  void validate() const;
};

/// M = I - (dt^2/2) L on active vectors.
class ImplicitMatrix {
 public:
  ImplicitMatrix(const DiscreteLaplacian& L, double dt);

  const DiscreteLaplacian& laplacian() const noexcept { return *L_; }
  double dt() const noexcept { return dt_; }
  double shift() const noexcept { return 0.5 * dt_ * dt_; }
  std::size_t size() const noexcept { return L_->active_size(); }

  void apply(std::span<const double> x, std::span<double> y) const;
  /// 1 + max_symbol * dt^2 / 2.
  double condition_bound() const noexcept;
  /// Diagonal of M on active points (same for weighted and unweighted forms).
  double diagonal() const noexcept;

 private:
  const DiscreteLaplacian* L_;
  double dt_;
  mutable GridFunction scratch_;
};

struct SolveStats {
  int iterations = 0;
  double residual = 0.0;
};

/// Reusable solver for M y = b. Factorizations and hierarchies are built once.
class DefiniteSolver {
 public:
  /// Throws ResourceError when DirectDense exceeds the cap. A multigrid
  /// request on an incompatible grid or order falls back to CG and sets
  /// fallback().
  DefiniteSolver(const ImplicitMatrix& M, const LinearSolverSpec& spec);
  ~DefiniteSolver();
  DefiniteSolver(DefiniteSolver&&) noexcept;
  DefiniteSolver& operator=(DefiniteSolver&&) noexcept;

  SolverKind kind() const noexcept { return kind_; }
  bool fallback() const noexcept { return fallback_; }
  const std::string& warning() const noexcept { return warning_; }

  /// Solves M y = b with y as the initial guess. Throws SolverError when the
  /// iteration budget is exhausted before the relative residual reaches tau.
  SolveStats solve(std::span<const double> b, std::span<double> y);

 private:
  SolveStats solve_cg(std::span<const double> b, std::span<double> y);
  SolveStats solve_mg(std::span<const double> b, std::span<double> y);

  const ImplicitMatrix* M_;
  LinearSolverSpec spec_;
  SolverKind kind_;
  bool fallback_ = false;
  std::string warning_;
  Cholesky dense_;
  std::unique_ptr<MultigridHierarchy> mg_;
  std::vector<double> r_, p_, q_, z_;
  GridFunction gb_, gx_, gr_;
};

/// One-shot solve from a zero initial guess.
std::vector<double> solve_definite_system(const ImplicitMatrix& M, std::span<const double> b,
                                          const LinearSolverSpec& spec, SolveStats* stats = nullptr);

/// Two time levels as packed active vectors. Grid functions are recovered
/// with unpack_active, which also refreshes ghosts.
struct WaveState {
  std::vector<double> w_prev;
  std::vector<double> w_curr;
  int n = 0;
  double dt = 0.0;
};

/// Time-stepper for w_tt = c^2 Lap w with zero initial velocity.
///
/// Every step checks ||W^n||_inf against growth_limit * ||W^0||_inf and
/// throws StabilityError when exceeded.
class WaveStepper {
 public:
  WaveStepper(const DiscreteLaplacian& L, SchemeKind scheme, double dt,
              const LinearSolverSpec& solver = {});

  SchemeKind scheme() const noexcept { return scheme_; }
  double dt() const noexcept { return dt_; }
  const DiscreteLaplacian& laplacian() const noexcept { return *L_; }
  const DefiniteSolver* solver() const noexcept { return solver_.get(); }

  double growth_limit() const noexcept { return growth_limit_; }
  void set_growth_limit(double g) noexcept { growth_limit_ = g; }

  /// W^0 = v0, W^1 from the first-step formula.
  WaveState first_step(std::span<const double> v0);
  /// W^{n+1} from W^n, W^{n-1}.
  void advance(WaveState& state);

  /// Runs n_steps from v0, calling visit(n, W^n) for n = 0..n_steps.
  void integrate(std::span<const double> v0, int n_steps,
                 const std::function<void(int, std::span<const double>)>& visit);

  /// Linear iterations since construction (implicit only).
  std::int64_t linear_iterations() const noexcept { return linear_iterations_; }
  std::int64_t linear_solves() const noexcept { return linear_solves_; }

 private:
  void check_growth(const WaveState& s);
  void solve(std::span<const double> rhs, std::span<double> y);

  const DiscreteLaplacian* L_;
  SchemeKind scheme_;
  double dt_;
  std::unique_ptr<ImplicitMatrix> M_;
  std::unique_ptr<DefiniteSolver> solver_;
  double growth_limit_ = 1e6;
  double initial_norm_ = 0.0;
  std::int64_t linear_iterations_ = 0;
  std::int64_t linear_solves_ = 0;
  GridFunction scratch_;
  std::vector<double> lw_, rhs_;
};

}  // namespace eigenwave
