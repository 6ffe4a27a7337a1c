#include "eigenwave/wavesolve.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "eigenwave/errors.hpp"

namespace eigenwave {

double stable_dt_explicit(const DiscreteLaplacian& L, double cfl) {
  if (!(cfl > 0.0) || cfl > 1.0) throw ConfigError("stable_dt_explicit: cfl must lie in (0, 1]");
  return cfl * 2.0 / std::sqrt(L.max_symbol());
}

SolverKind parse_solver_kind(const std::string& name) {
  if (name == "direct" || name == "dense") return SolverKind::DirectDense;
  if (name == "cg") return SolverKind::ConjugateGradient;
  if (name == "multigrid" || name == "mg") return SolverKind::Multigrid;
  throw ConfigError("unknown linear solver '" + name + "'");
}

const char* to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::DirectDense: return "direct";
    case SolverKind::ConjugateGradient: return "cg";
    case SolverKind::Multigrid: return "multigrid";
  }
  return "?";
}

void LinearSolverSpec::validate() const {
  if (!(tolerance > 0.0)) throw ConfigError("solver: tolerance must be positive");
  if (max_iterations < 1) throw ConfigError("solver: max_iterations must be at least 1");
  if (multigrid.pre_smooth < 0 || multigrid.post_smooth < 0 ||
      multigrid.pre_smooth + multigrid.post_smooth < 1)
    throw ConfigError("solver: multigrid needs at least one smoothing sweep");
  if (multigrid.coarsest_cells < 4) throw ConfigError("solver: coarsest_cells must be at least 4");
}

ImplicitMatrix::ImplicitMatrix(const DiscreteLaplacian& L, double dt)
    : L_(&L), dt_(dt), scratch_(L.grid()) {
  if (!(dt > 0.0)) throw ConfigError("implicit matrix: dt must be positive");
}

void ImplicitMatrix::apply(std::span<const double> x, std::span<double> y) const {
  L_->apply_active(x, y, scratch_);
  const double s = shift();
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = x[i] - s * y[i];
}

double ImplicitMatrix::condition_bound() const noexcept {
  return 1.0 + shift() * L_->max_symbol();
}

double ImplicitMatrix::diagonal() const noexcept {
  const StructuredGrid& g = L_->grid();
  const double c2 = L_->wave_speed() * L_->wave_speed();
  const double centre = L_->order() == 2 ? 2.0 : 30.0 / 12.0;
  double d = 0.0;
  for (int a = 0; a < g.dim(); ++a) d += centre / (g.spacing(a) * g.spacing(a));
  return 1.0 + shift() * c2 * d;
}

DefiniteSolver::DefiniteSolver(const ImplicitMatrix& M, const LinearSolverSpec& spec)
    : M_(&M), spec_(spec), kind_(spec.kind) {
  spec_.validate();
  const DiscreteLaplacian& L = M.laplacian();
  if (kind_ == SolverKind::DirectDense) {
    if (M.size() > spec.dense_cap)
      throw ResourceError("direct solver: " + std::to_string(M.size()) +
                          " unknowns exceed dense cap " + std::to_string(spec.dense_cap));
    DenseMatrix a = assemble_dense(L, spec.dense_cap);
    const double s = M.shift();
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t i = 0; i < a.rows(); ++i) a(i, j) = (i == j ? 1.0 : 0.0) - s * a(i, j);
    dense_ = Cholesky(std::move(a));
  } else if (kind_ == SolverKind::Multigrid) {
    if (L.order() != 2 || !MultigridHierarchy::compatible(L.grid(), spec.multigrid.coarsest_cells)) {
      kind_ = SolverKind::ConjugateGradient;
      fallback_ = true;
      warning_ = L.order() != 2 ? "multigrid supports order 2 only; using CG"
                                : "grid does not coarsen by factors of two; using CG";
      std::clog << "warning: " << warning_ << '\n';
    } else {
      mg_ = std::make_unique<MultigridHierarchy>(L, M.shift(), spec.multigrid);
      gb_ = GridFunction(L.grid());
      gx_ = GridFunction(L.grid());
      gr_ = GridFunction(L.grid());
    }
  }
  const std::size_t n = M.size();
  r_.resize(n);
  p_.resize(n);
  q_.resize(n);
  if (spec_.jacobi) z_.resize(n);
}

DefiniteSolver::~DefiniteSolver() = default;
DefiniteSolver::DefiniteSolver(DefiniteSolver&&) noexcept = default;
DefiniteSolver& DefiniteSolver::operator=(DefiniteSolver&&) noexcept = default;

SolveStats DefiniteSolver::solve(std::span<const double> b, std::span<double> y) {
  if (b.size() != M_->size() || y.size() != M_->size())
    throw DimensionError("linear solve: vector length mismatch");
  switch (kind_) {
    case SolverKind::DirectDense: {
      std::copy(b.begin(), b.end(), y.begin());
      dense_.solve_in_place(y);
      return {1, 0.0};
    }
    case SolverKind::Multigrid: return solve_mg(b, y);
    case SolverKind::ConjugateGradient: break;
  }
  return solve_cg(b, y);
}

SolveStats DefiniteSolver::solve_cg(std::span<const double> b, std::span<double> y) {
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    std::fill(y.begin(), y.end(), 0.0);
    return {0, 0.0};
  }
  const std::size_t n = b.size();
  M_->apply(y, q_);
  for (std::size_t i = 0; i < n; ++i) r_[i] = b[i] - q_[i];
  const double inv_diag = 1.0 / M_->diagonal();
  auto precond = [&](std::span<const double> r) -> std::span<const double> {
    if (!spec_.jacobi) return r;
    for (std::size_t i = 0; i < n; ++i) z_[i] = inv_diag * r[i];
    return z_;
  };
  double rnorm = norm2(r_);
  if (rnorm <= spec_.tolerance * bnorm) return {0, rnorm / bnorm};
  auto z = precond(r_);
  std::copy(z.begin(), z.end(), p_.begin());
  double rz = dot(r_, z);
  for (int it = 1; it <= spec_.max_iterations; ++it) {
    M_->apply(p_, q_);
    const double alpha = rz / dot(p_, q_);
    axpy(alpha, p_, y);
    axpy(-alpha, q_, r_);
    rnorm = norm2(r_);
    if (rnorm <= spec_.tolerance * bnorm) return {it, rnorm / bnorm};
    z = precond(r_);
    const double rz_new = dot(r_, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p_[i] = z[i] + beta * p_[i];
  }
  throw SolverError("cg: no convergence in " + std::to_string(spec_.max_iterations) +
                        " iterations, relative residual " + std::to_string(rnorm / bnorm),
                    rnorm / bnorm, spec_.max_iterations);
}

SolveStats DefiniteSolver::solve_mg(std::span<const double> b, std::span<double> y) {
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    std::fill(y.begin(), y.end(), 0.0);
    return {0, 0.0};
  }
  const ActiveLayout& lay = M_->laplacian().layout();
  unpack_active(b, lay, gb_);
  unpack_active(y, lay, gx_);
  double rel = 0.0;
  for (int it = 0;; ++it) {
    mg_->residual(0, gb_, gx_, gr_);
    lay.pack(gr_, r_);
    rel = norm2(r_) / bnorm;
    if (rel <= spec_.tolerance) {
      lay.pack(gx_, y);
      return {it, rel};
    }
    if (it == spec_.max_iterations) break;
    mg_->vcycle(gb_, gx_);
  }
  throw SolverError("multigrid: no convergence in " + std::to_string(spec_.max_iterations) +
                        " cycles, relative residual " + std::to_string(rel),
                    rel, spec_.max_iterations);
}

std::vector<double> solve_definite_system(const ImplicitMatrix& M, std::span<const double> b,
                                          const LinearSolverSpec& spec, SolveStats* stats) {
  DefiniteSolver solver(M, spec);
  std::vector<double> y(M.size(), 0.0);
  const SolveStats s = solver.solve(b, y);
  if (stats) *stats = s;
  return y;
}

WaveStepper::WaveStepper(const DiscreteLaplacian& L, SchemeKind scheme, double dt,
                         const LinearSolverSpec& solver)
    : L_(&L), scheme_(scheme), dt_(dt), scratch_(L.grid()) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("wave stepper: dt must be positive");
  if (scheme == SchemeKind::Implicit) {
    M_ = std::make_unique<ImplicitMatrix>(L, dt);
    solver_ = std::make_unique<DefiniteSolver>(*M_, solver);
  }
  lw_.resize(L.active_size());
  rhs_.resize(L.active_size());
}

void WaveStepper::solve(std::span<const double> rhs, std::span<double> y) {
  const SolveStats s = solver_->solve(rhs, y);
  linear_iterations_ += s.iterations;
  ++linear_solves_;
}

void WaveStepper::check_growth(const WaveState& s) {
  const double w = norm_inf(s.w_curr);
  if (!std::isfinite(w) || w > growth_limit_ * initial_norm_) {
    const double growth = initial_norm_ > 0.0 ? w / initial_norm_ : w;
    throw StabilityError("wave solve unstable at step " + std::to_string(s.n) + ": growth " +
                             std::to_string(growth) + " exceeds " + std::to_string(growth_limit_),
                         s.n, growth);
  }
}

WaveState WaveStepper::first_step(std::span<const double> v0) {
  const std::size_t n = L_->active_size();
  if (v0.size() != n) throw DimensionError("wave stepper: initial data length mismatch");
  WaveState s;
  s.dt = dt_;
  s.w_prev.assign(v0.begin(), v0.end());
  s.w_curr.assign(n, 0.0);
  initial_norm_ = norm_inf(v0);
  if (scheme_ == SchemeKind::Explicit) {
    L_->apply_active(v0, lw_, scratch_);
    const double c = 0.5 * dt_ * dt_;
    for (std::size_t i = 0; i < n; ++i) s.w_curr[i] = v0[i] + c * lw_[i];
  } else {
    std::copy(v0.begin(), v0.end(), s.w_curr.begin());
    solve(v0, s.w_curr);
  }
  s.n = 1;
  check_growth(s);
  return s;
}

void WaveStepper::advance(WaveState& s) {
  const std::size_t n = L_->active_size();
  const double dt2 = dt_ * dt_;
  if (scheme_ == SchemeKind::Explicit) {
    L_->apply_active(s.w_curr, lw_, scratch_);
    for (std::size_t i = 0; i < n; ++i)
      s.w_prev[i] = 2.0 * s.w_curr[i] - s.w_prev[i] + dt2 * lw_[i];
  } else {
    L_->apply_active(s.w_prev, lw_, scratch_);
    for (std::size_t i = 0; i < n; ++i)
      rhs_[i] = 2.0 * s.w_curr[i] - s.w_prev[i] + 0.5 * dt2 * lw_[i];
    // Warm start from W^n.
    std::copy(s.w_curr.begin(), s.w_curr.end(), s.w_prev.begin());
    solve(rhs_, s.w_prev);
  }
  std::swap(s.w_prev, s.w_curr);
  ++s.n;
  check_growth(s);
}

void WaveStepper::integrate(std::span<const double> v0, int n_steps,
                            const std::function<void(int, std::span<const double>)>& visit) {
  if (n_steps < 1) throw ConfigError("wave stepper: need at least one step");
  visit(0, v0);
  WaveState s = first_step(v0);
  visit(1, s.w_curr);
  for (int k = 2; k <= n_steps; ++k) {
    advance(s);
    visit(k, s.w_curr);
  }
}

}  // namespace eigenwave
