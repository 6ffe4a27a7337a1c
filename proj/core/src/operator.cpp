#include "eigenwave/operator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "eigenwave/errors.hpp"

namespace eigenwave {

EigenWaveOperator::EigenWaveOperator(const DiscreteLaplacian& L, const FilterSpec& filter,
                                     SchemeKind scheme, const LinearSolverSpec& solver)
    : L_(&L), filter_(filter), scheme_(scheme), stepper_(L, scheme, filter.dt(), solver) {
  if (scheme == SchemeKind::Explicit) {
    const double lam_max = std::sqrt(L.max_symbol());
    if (lam_max * filter.dt() > 2.0)
      throw DomainError("explicit operator: dt violates the CFL limit (lambda_max*dt = " +
                        std::to_string(lam_max * filter.dt()) + ")");
  }
}

void EigenWaveOperator::apply(std::span<const double> x, std::span<double> y) {
  if (x.size() != size() || y.size() != size())
    throw DimensionError("apply_S: vector length mismatch");
  const std::int64_t lin0 = stepper_.linear_iterations();
  std::vector<double> acc(size(), 0.0);
  const auto& coef = filter_.coefficients();
  stepper_.integrate(x, filter_.n_steps(),
                     [&](int n, std::span<const double> w) { axpy(coef[n], w, acc); });
  std::copy(acc.begin(), acc.end(), y.begin());
  ++counters_.wave_solves;
  counters_.time_steps += filter_.n_steps();
  counters_.linear_iterations += stepper_.linear_iterations() - lin0;
}

std::vector<double> EigenWaveOperator::apply(std::span<const double> x) {
  std::vector<double> y(size());
  apply(x, y);
  return y;
}

double EigenWaveOperator::beta_of(double lambda) const {
  return beta_tilde_d(lambda, filter_, scheme_);
}

std::vector<double> spectrum_map(const EigenWaveOperator& op, std::span<const double> lambdas) {
  std::vector<double> out;
  out.reserve(lambdas.size());
  for (double l : lambdas) {
    if (l < 0.0) throw DomainError("spectrum_map: lambda must be nonnegative");
    out.push_back(op.beta_of(l));
  }
  return out;
}

FilterSpec explicit_filter(const DiscreteLaplacian& L, double omega, int n_periods, double cfl) {
  if (!(omega > 0.0)) throw ConfigError("explicit filter: omega must be positive");
  const double dt_max = stable_dt_explicit(L, cfl);
  const double period = 2.0 * std::numbers::pi / omega;
  const int per = std::max(5, static_cast<int>(std::ceil(period / dt_max)));
  return FilterSpec(omega, n_periods, n_periods * per);
}

}  // namespace eigenwave
