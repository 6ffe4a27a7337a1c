#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "eigenwave/eigensolve.hpp"
#include "eigenwave/harness/config.hpp"
#include "eigenwave/laplacian.hpp"
#include "eigenwave/oracle.hpp"

namespace eigenwave {

/// One row of eigenpairs.csv.
struct PairRow {
  int j = 0;
  double lambda = 0.0;
  double lambda_true = 0.0;
  int k = 0;  // 1-based index into the reference spectrum
  int mult = 1;
  double eig_err = 0.0;
  double evect_err = 0.0;
  double eig_res = 0.0;
};

struct RunSummary {
  int num_eigs = 0;
  std::int64_t wave_solves = 0;
  double steps_per_period = 0.0;
  double wave_solves_per_eig = 0.0;
  double time_steps_per_eig = 0.0;
  double max_eig_err = 0.0;
  double max_evect_err = 0.0;
  double max_eig_res = 0.0;

  std::int64_t time_steps = 0;
  std::int64_t linear_iterations = 0;
  std::int64_t linear_solves = 0;
  /// Eigensolver stage only; not written to summary.csv.
  double wall_seconds = 0.0;
  bool converged = false;
  std::string diagnostic;
  std::string solver_note;  // multigrid fallback warning, if any
};

struct RunReport {
  RunConfig config;
  RunSummary summary;
  std::vector<PairRow> rows;  // ascending lambda
  /// Computed pairs in row order (vectors are weighted active vectors).
  std::vector<EigenPair> pairs;
  ReferenceSpectrum reference;
};

/// Metrics of computed pairs against a reference with eigenvectors.
///
/// Values are measured on unscaled grid values: evect-err is the max-norm
/// distance to the matched cluster divided by the max norm of the
/// projection, eig-res is ||L v + lambda^2 v||_inf / (lambda^2 ||v||_inf).
/// A zero reference eigenvalue switches eig-err to absolute and eig-res to
/// ||L v||_inf / ||v||_inf. Throws ConfigError for an empty reference and
/// InvariantError when a pair matches nothing within 1e-3 relative.
std::vector<PairRow> compute_metrics(const std::vector<EigenPair>& pairs, const DiscreteLaplacian& L,
                                     const ReferenceSpectrum& reference);

/// Builds grid, operator and eigensolver, then measures against the oracle.
/// Library errors are rethrown with the stage and a config description.
RunReport run_case(const RunConfig& config);

/// One-line description used in error context.
std::string describe(const RunConfig& config);

/// Reference spectrum of the configured oracle up to lambda_max.
ReferenceSpectrum build_reference(const RunConfig& config, const DiscreteLaplacian& L,
                                  double lambda_max);

void write_summary_csv(std::ostream& os, const RunSummary& summary);
void write_eigenpairs_csv(std::ostream& os, const std::vector<PairRow>& rows);
/// summary.csv and eigenpairs.csv in dir, created if missing.
void write_report(const std::string& dir, const RunReport& report);

}  // namespace eigenwave
