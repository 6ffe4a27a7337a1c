#include "eigenwave/harness/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "eigenwave/errors.hpp"
#include "eigenwave/operator.hpp"

namespace eigenwave {

namespace {

// Rethrows the active exception as the same type with a prefixed message.
[[noreturn]] void rethrow_with(const std::string& prefix) {
  try {
    throw;
  } catch (const SolverError& e) {
    throw SolverError(prefix + e.what(), e.residual(), e.iterations());
  } catch (const StabilityError& e) {
    throw StabilityError(prefix + e.what(), e.step(), e.growth());
  } catch (const NonconvergenceError& e) {
    throw NonconvergenceError(prefix + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError(prefix + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(prefix + e.what());
  } catch (const DomainError& e) {
    throw DomainError(prefix + e.what());
  } catch (const DimensionError& e) {
    throw DimensionError(prefix + e.what());
  } catch (const ResourceError& e) {
    throw ResourceError(prefix + e.what());
  } catch (const InvariantError& e) {
    throw InvariantError(prefix + e.what());
  }
}

template <class F>
auto staged(const char* stage, const RunConfig& cfg, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error&) {
    rethrow_with(std::string(stage) + " [" + describe(cfg) + "]: ");
  }
}

void unscale(const ActiveLayout& lay, std::span<double> v) {
  for (std::size_t a = 0; a < v.size(); ++a) v[a] /= lay.sqrt_weight(a);
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

}  // namespace

std::string describe(const RunConfig& c) {
  std::ostringstream os;
  os << to_string(c.geometry) << " ";
  for (int d = 0; d < c.dim(); ++d) os << (d ? "x" : "") << c.n_cells[d];
  os << " order=" << c.order << " omega=" << c.omega << " Np=" << c.n_periods << " "
     << to_string(c.scheme);
  if (c.scheme == SchemeKind::Implicit) os << " NITS=" << c.n_its;
  else os << " cfl=" << c.cfl;
  os << " solver=" << to_string(c.solver.kind) << " tau=" << c.solver.tolerance << " "
     << to_string(c.eigensolver) << " Nr=" << c.n_requested << " seed=" << c.seed;
  return os.str();
}

std::vector<PairRow> compute_metrics(const std::vector<EigenPair>& pairs, const DiscreteLaplacian& L,
                                     const ReferenceSpectrum& ref) {
  if (ref.size() == 0) throw ConfigError("compute_metrics: empty reference spectrum");
  if (!ref.has_vectors()) throw ConfigError("compute_metrics: reference has no eigenvectors");
  const ActiveLayout& lay = L.layout();
  const std::size_t n = lay.size();
  std::vector<PairRow> rows;
  rows.reserve(pairs.size());
  std::vector<double> lv(n), p(n), r(n), u(n);
  GridFunction scratch;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const EigenPair& pr = pairs[i];
    if (pr.vector.size() != n) throw DimensionError("compute_metrics: vector length mismatch");
    PairRow row;
    row.j = static_cast<int>(i + 1);
    row.lambda = pr.lambda;
    const std::size_t k = ref.nearest(pr.lambda);
    row.k = static_cast<int>(k + 1);
    row.lambda_true = ref.lambda[k];
    const Cluster& cl = ref.clusters[ref.cluster_of[k]];
    row.mult = static_cast<int>(cl.count);

    const double lt = row.lambda_true;
    row.eig_err = lt > 0.0 ? std::abs(pr.lambda - lt) / lt : std::abs(pr.lambda - lt);
    if (row.eig_err > 1e-3 && lt > 0.0)
      throw InvariantError("compute_metrics: computed lambda " + fmt("%.6f", pr.lambda) +
                           " has no reference match (nearest " + fmt("%.6f", lt) + ")");

    const DenseMatrix W = ref.basis(ref.cluster_of[k]);
    std::fill(p.begin(), p.end(), 0.0);
    for (std::size_t c = 0; c < W.cols(); ++c) axpy(dot(W.col(c), pr.vector), W.col(c), p);
    for (std::size_t a = 0; a < n; ++a) r[a] = pr.vector[a] - p[a];
    unscale(lay, p);
    unscale(lay, r);
    const double pn = norm_inf(p);
    row.evect_err = pn > 0.0 ? norm_inf(r) / pn : std::numeric_limits<double>::infinity();

    L.apply_active(pr.vector, lv, scratch);
    std::copy(pr.vector.begin(), pr.vector.end(), u.begin());
    unscale(lay, lv);
    unscale(lay, u);
    const double l2 = pr.lambda * pr.lambda;
    for (std::size_t a = 0; a < n; ++a) r[a] = lv[a] + l2 * u[a];
    const double un = norm_inf(u);
    row.eig_res = norm_inf(r) / ((lt > 0.0 ? l2 : 1.0) * un);
    rows.push_back(row);
  }
  return rows;
}

ReferenceSpectrum build_reference(const RunConfig& cfg, const DiscreteLaplacian& L,
                                  double lambda_max) {
  if (cfg.oracle == OracleKind::Dense)
    return dense_reference(L, cfg.solver.dense_cap, cfg.cluster_tol);
  return analytic_discrete_box(L, lambda_max, true, cfg.cluster_tol);
}

RunReport run_case(const RunConfig& cfg) {
  staged("config", cfg, [&] { cfg.validate(); });
  RunReport rep;
  rep.config = cfg;

  const StructuredGrid grid = staged("grid", cfg, [&] { return cfg.grid(); });
  const DiscreteLaplacian L =
      staged("laplacian", cfg, [&] { return DiscreteLaplacian(grid, cfg.order, cfg.bc); });
  const FilterSpec filter = staged("filter", cfg, [&] {
    return cfg.scheme == SchemeKind::Implicit
               ? FilterSpec::implicit(cfg.filter_omega(), cfg.n_periods, cfg.n_its)
               : explicit_filter(L, cfg.omega, cfg.n_periods, cfg.cfl);
  });
  EigenWaveOperator op = staged(
      "operator", cfg, [&] { return EigenWaveOperator(L, filter, cfg.scheme, cfg.solver); });
  if (const DefiniteSolver* s = op.stepper().solver(); s && s->fallback())
    rep.summary.solver_note = s->warning();

  // Inexact implicit solves leave S nonsymmetric at roughly the solver tolerance.
  const double sym_tol =
      cfg.scheme == SchemeKind::Implicit && cfg.solver.kind != SolverKind::DirectDense
          ? std::max(1e-8, 100.0 * cfg.solver.tolerance)
          : 1e-8;
  const auto t0 = std::chrono::steady_clock::now();
  EigenSolveResult res = staged("eigensolve", cfg, [&] {
    switch (cfg.eigensolver) {
      case EigensolverKind::Arnoldi: {
        RestartOptions o;
        o.n_requested = cfg.n_requested;
        o.n_arnoldi = cfg.n_arnoldi;
        o.tol = cfg.tol;
        o.max_restarts = cfg.max_restarts;
        o.seed = cfg.seed;
        o.symmetry_tol = sym_tol;
        return implicit_restart_solve(op, o, &L);
      }
      case EigensolverKind::Subspace: {
        SubspaceOptions o;
        o.n_requested = cfg.n_requested;
        o.n_block = cfg.n_arnoldi;
        o.tol = cfg.tol;
        o.max_sweeps = cfg.max_restarts;
        o.seed = cfg.seed;
        o.symmetry_tol = sym_tol;
        return simultaneous_iteration(op, o, &L);
      }
      case EigensolverKind::Power:
        break;
    }
    std::vector<double> v0(op.size());
    SplitMix64 rng(cfg.seed);
    rng.fill(v0);
    return power_iteration(op, v0, cfg.tol, cfg.max_restarts, &L);
  });
  rep.summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::stable_sort(res.pairs.begin(), res.pairs.end(),
                   [](const EigenPair& a, const EigenPair& b) { return a.lambda < b.lambda; });
  double lmax = 0.0;
  for (const EigenPair& p : res.pairs) lmax = std::max(lmax, p.lambda);
  const double cap = std::max(2.0 * cfg.omega, 1.2 * lmax);
  rep.reference = staged("oracle", cfg, [&] { return build_reference(cfg, L, cap); });
  rep.rows = staged("metrics", cfg, [&] { return compute_metrics(res.pairs, L, rep.reference); });
  rep.pairs = std::move(res.pairs);

  RunSummary& s = rep.summary;
  const OperatorCounters& c = op.counters();
  s.num_eigs = static_cast<int>(rep.rows.size());
  s.wave_solves = c.wave_solves;
  s.time_steps = c.time_steps;
  s.linear_iterations = c.linear_iterations;
  s.linear_solves = op.stepper().linear_solves();
  s.steps_per_period = filter.steps_per_period();
  const double nc = s.num_eigs > 0 ? s.num_eigs : std::numeric_limits<double>::quiet_NaN();
  s.wave_solves_per_eig = double(s.wave_solves) / nc;
  s.time_steps_per_eig = double(s.time_steps) / nc;
  for (const PairRow& r : rep.rows) {
    s.max_eig_err = std::max(s.max_eig_err, r.eig_err);
    s.max_evect_err = std::max(s.max_evect_err, r.evect_err);
    s.max_eig_res = std::max(s.max_eig_res, r.eig_res);
  }
  s.converged = res.converged;
  s.diagnostic = res.diagnostic;

  double m1 = 0.0, m2 = 0.0, m3 = 0.0;
  for (const PairRow& r : rep.rows) {
    m1 = std::max(m1, r.eig_err);
    m2 = std::max(m2, r.evect_err);
    m3 = std::max(m3, r.eig_res);
  }
  if (m1 != s.max_eig_err || m2 != s.max_evect_err || m3 != s.max_eig_res)
    throw InvariantError("run_case: summary maxima differ from row maxima");
  return rep;
}

void write_summary_csv(std::ostream& os, const RunSummary& s) {
  os << "num-eigs,wave-solves,steps-per-period,wave-solves-per-eig,time-steps-per-eig,"
        "max-eig-err,max-evect-err,max-eig-res,time-steps,linear-iterations\n";
  char buf[512];
  std::snprintf(buf, sizeof buf, "%d,%lld,%.6g,%.6g,%.6g,%.5e,%.5e,%.5e,%lld,%lld\n", s.num_eigs,
                static_cast<long long>(s.wave_solves), s.steps_per_period, s.wave_solves_per_eig,
                s.time_steps_per_eig, s.max_eig_err, s.max_evect_err, s.max_eig_res,
                static_cast<long long>(s.time_steps), static_cast<long long>(s.linear_iterations));
  os << buf;
}

void write_eigenpairs_csv(std::ostream& os, const std::vector<PairRow>& rows) {
  os << "j,lambda,lambda_true,k,mult,eig-err,evect-err,eig-res\n";
  char buf[256];
  for (const PairRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%.6f,%.6f,%d,%d,%.5e,%.5e,%.5e\n", r.j, r.lambda,
                  r.lambda_true, r.k, r.mult, r.eig_err, r.evect_err, r.eig_res);
    os << buf;
  }
}

void write_report(const std::string& dir, const RunReport& rep) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);
  std::ofstream s(base / "summary.csv", std::ios::binary);
  std::ofstream e(base / "eigenpairs.csv", std::ios::binary);
  if (!s || !e) throw ConfigError("cannot write report files in '" + dir + "'");
  write_summary_csv(s, rep.summary);
  write_eigenpairs_csv(e, rep.rows);
}

}  // namespace eigenwave
