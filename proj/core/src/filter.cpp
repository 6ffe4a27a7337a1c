#include "eigenwave/filter.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "eigenwave/errors.hpp"

namespace eigenwave {

SchemeKind parse_scheme_kind(const char* name) {
  const std::string_view s(name);
  if (s == "implicit") return SchemeKind::Implicit;
  if (s == "explicit") return SchemeKind::Explicit;
  throw ConfigError("unknown scheme '" + std::string(s) + "'");
}

const char* to_string(SchemeKind kind) {
  return kind == SchemeKind::Implicit ? "implicit" : "explicit";
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

double beta(double lambda, double omega, int n_periods) {
  if (!(omega > 0.0)) throw DomainError("beta: omega must be positive");
  if (lambda < 0.0) throw DomainError("beta: lambda must be nonnegative");
  if (n_periods < 1) throw DomainError("beta: n_periods must be at least 1");
  const double tf = n_periods * 2.0 * std::numbers::pi / omega;
  return sinc((omega - lambda) * tf) + sinc((omega + lambda) * tf) - 0.5 * sinc(lambda * tf);
}

std::vector<double> sigma_weights(int n_steps, double dt) {
  if (n_steps < 1) throw ConfigError("sigma_weights: n_steps must be at least 1");
  std::vector<double> s(static_cast<std::size_t>(n_steps) + 1, dt);
  s.front() = 0.5 * dt;
  s.back() = 0.5 * dt;
  return s;
}

double alpha_d_value(double omega_dt) {
  if (!(omega_dt > 0.0) || !(omega_dt < 0.5 * std::numbers::pi))
    throw DomainError("alpha_d: omega*dt = " + std::to_string(omega_dt) + " outside (0, pi/2)");
  return std::tan(0.5 * omega_dt) / std::tan(omega_dt);
}

double lambda_tilde(double lambda, double dt, SchemeKind scheme) {
  const double x = lambda * dt;
  if (scheme == SchemeKind::Implicit)
    return (2.0 / dt) * std::asin(0.5 * x / std::sqrt(1.0 + 0.5 * x * x));
  if (x > 2.0)
    throw DomainError("lambda_tilde: explicit lambda*dt = " + std::to_string(x) +
                      " exceeds the stability limit 2");
  return (2.0 / dt) * std::asin(0.5 * x);
}

FilterSpec::FilterSpec(double omega, int n_periods, int n_steps)
    : omega_(omega), n_periods_(n_periods), n_steps_(n_steps) {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw ConfigError("filter: omega must be positive");
  if (n_periods < 1) throw ConfigError("filter: n_periods must be at least 1");
  if (n_steps < 1) throw ConfigError("filter: n_steps must be at least 1");
  tf_ = n_periods * 2.0 * std::numbers::pi / omega;
  dt_ = tf_ / n_steps;
  alpha_d_ = alpha_d_value(omega * dt_);
  sigma_ = sigma_weights(n_steps, dt_);
  coef_.resize(sigma_.size());
  for (int n = 0; n <= n_steps; ++n)
    coef_[n] = (2.0 / tf_) * sigma_[n] * (std::cos(omega * n * dt_) - 0.5 * alpha_d_);
}

double beta_discrete(double lambda_t, const FilterSpec& spec) {
  double s = 0.0;
  const double dt = spec.dt();
  for (int n = 0; n <= spec.n_steps(); ++n) s += spec.coefficient(n) * std::cos(lambda_t * n * dt);
  return s;
}

double beta_tilde_d(double lambda, const FilterSpec& spec, SchemeKind scheme) {
  return beta_discrete(lambda_tilde(lambda, spec.dt(), scheme), spec);
}

double adjusted_omega(double omega, int n_its) {
  if (n_its <= 4)
    throw DomainError("adjusted_omega: needs at least 5 steps per period, got " +
                      std::to_string(n_its));
  const double s = std::sin(std::numbers::pi / n_its);
  const double s2 = s * s;
  return (omega * std::numbers::pi / n_its) * std::sqrt((1.0 - 2.0 * s2) / s2);
}

}  // namespace eigenwave
