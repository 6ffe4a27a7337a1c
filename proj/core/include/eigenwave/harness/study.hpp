#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "eigenwave/filter.hpp"
#include "eigenwave/harness/config.hpp"
#include "eigenwave/harness/run.hpp"

namespace eigenwave {

enum class SweepAxis { NIts, NPeriods, NRequested, Tolerance };

SweepAxis parse_sweep_axis(const std::string& name);
const char* to_string(SweepAxis axis);

/// Copy of base with the swept parameter set. Integer axes throw ConfigError
/// for non-integral values. The tolerance axis also raises the eigensolver
/// tolerance to ten times the solve tolerance, capped at 1e-5 (never below
/// the base tolerance).
RunConfig apply_sweep_value(const RunConfig& base, SweepAxis axis, double value);

struct SweepPoint {
  double value = 0.0;
  bool ok = false;
  std::string error;
  RunSummary summary;
};

struct SweepTable {
  SweepAxis axis = SweepAxis::NIts;
  std::vector<SweepPoint> points;  // input order
};

/// One run_case per value. Library errors are recorded per point.
SweepTable study_sweep(SweepAxis axis, const std::vector<double>& values, const RunConfig& base);
void write_sweep_csv(std::ostream& os, const SweepTable& table);

struct ScalingRow {
  int n = 0;  // cells per axis
  std::size_t unknowns = 0;
  int num_eigs = 0;
  std::int64_t wave_solves = 0;
  double cycles_per_solve = 0.0;
  double wall_seconds = 0.0;  // median of the repeats
  double cpu_ratio = 0.0;     // vs previous level, 0 on the first
  double cpu_per_n = 0.0;     // wall / unknowns, normalized to the first level
  bool jitter = false;        // repeats spread more than 20% around the median
  std::string solver_note;
};

/// Runs base at each refinement level (cells per axis) `repeats` times.
std::vector<ScalingRow> scaling_study(const RunConfig& base, const std::vector<int>& levels,
                                      int repeats = 3);
void write_scaling_csv(std::ostream& os, const std::vector<ScalingRow>& rows);

/// Subspace-iteration rate estimate: solves beta(1+delta) = beta_r on the
/// first descending branch of beta(.;1) and returns beta(1+2 delta)/beta(1+delta).
/// Throws DomainError unless 0.7 <= beta_r < 1.
double cr_estimate(double beta_r, int n_periods);
/// tol^(1/wave_solves).
double measured_cr(double tol, double wave_solves);

/// CSV with columns lambda,lambda/omega,beta,beta_tilde_d on `samples`
/// uniformly spaced points of [0, lambda_max].
void emit_filter_curve(std::ostream& os, const FilterSpec& spec, SchemeKind scheme,
                       double lambda_max, int samples);

}  // namespace eigenwave
