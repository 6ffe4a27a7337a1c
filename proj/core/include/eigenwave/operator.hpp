#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "eigenwave/filter.hpp"
#include "eigenwave/laplacian.hpp"
#include "eigenwave/wavesolve.hpp"

namespace eigenwave {

/// Abstract real symmetric operator on active vectors.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;
  virtual std::size_t size() const = 0;
  virtual void apply(std::span<const double> x, std::span<double> y) = 0;
  /// Total matrix-vector products so far.
  virtual std::int64_t applies() const = 0;
};

struct OperatorCounters {
  std::int64_t wave_solves = 0;
  std::int64_t time_steps = 0;
  std::int64_t linear_iterations = 0;
};

/// S: initial data -> filtered wave solution over one filter window.
class EigenWaveOperator final : public LinearOperator {
 public:
  /// filter.n_steps() sets N_t; dt is taken from the filter.
  EigenWaveOperator(const DiscreteLaplacian& L, const FilterSpec& filter, SchemeKind scheme,
                    const LinearSolverSpec& solver = {});

  std::size_t size() const override { return L_->active_size(); }
  void apply(std::span<const double> x, std::span<double> y) override;
  std::vector<double> apply(std::span<const double> x);
  std::int64_t applies() const override { return counters_.wave_solves; }

  const OperatorCounters& counters() const noexcept { return counters_; }
  const DiscreteLaplacian& laplacian() const noexcept { return *L_; }
  const FilterSpec& filter() const noexcept { return filter_; }
  SchemeKind scheme() const noexcept { return scheme_; }
  const WaveStepper& stepper() const noexcept { return stepper_; }

  /// beta_tilde_d(lambda) of this operator's filter and scheme.
  double beta_of(double lambda) const;

 private:
  const DiscreteLaplacian* L_;
  FilterSpec filter_;
  SchemeKind scheme_;
  WaveStepper stepper_;
  OperatorCounters counters_;
};

/// Scalar filter pipeline evaluated at each lambda; no grid work.
std::vector<double> spectrum_map(const EigenWaveOperator& op, std::span<const double> lambdas);

/// Filter spec for an explicit run: the step count per period is the
/// smallest integer keeping dt <= cfl * dt_max, with at least 5 per period.
FilterSpec explicit_filter(const DiscreteLaplacian& L, double omega, int n_periods, double cfl);

}  // namespace eigenwave
