#pragma once

#include <vector>

namespace eigenwave {

enum class SchemeKind { Explicit, Implicit };

SchemeKind parse_scheme_kind(const char* name);
const char* to_string(SchemeKind kind);

/// sin(x)/x with a series branch near zero.
double sinc(double x);

/// Continuous filter function beta(lambda; omega) for N_p periods.
/// Throws DomainError for omega <= 0, lambda < 0 or n_periods < 1.
double beta(double lambda, double omega, int n_periods);

/// Trapezoid weights sigma_0..sigma_N (dt absorbed, ends halved).
std::vector<double> sigma_weights(int n_steps, double dt);

/// tan(x/2)/tan(x); DomainError unless 0 < x < pi/2.
double alpha_d_value(double omega_dt);

/// Effective frequency of the time-stepper for a mode of frequency lambda.
/// Explicit throws DomainError when lambda*dt > 2.
double lambda_tilde(double lambda, double dt, SchemeKind scheme);

/// Filter parameters: T_f = N_p*2*pi/omega, dt = T_f/N_t.
class FilterSpec {
 public:
  FilterSpec() = default;
  /// Throws ConfigError for omega <= 0, n_periods < 1 or n_steps < 1, and
  /// DomainError when omega*dt falls outside the alpha_d domain.
  FilterSpec(double omega, int n_periods, int n_steps);

  /// Implicit convention: n_steps = n_periods * n_its.
  static FilterSpec implicit(double omega, int n_periods, int n_its) {
    return FilterSpec(omega, n_periods, n_periods * n_its);
  }

  double omega() const noexcept { return omega_; }
  int n_periods() const noexcept { return n_periods_; }
  int n_steps() const noexcept { return n_steps_; }
  double final_time() const noexcept { return tf_; }
  double dt() const noexcept { return dt_; }
  double alpha_d() const noexcept { return alpha_d_; }
  /// Steps per period N_t/N_p (may be fractional for explicit step counts).
  double steps_per_period() const noexcept { return double(n_steps_) / n_periods_; }
  const std::vector<double>& sigma() const noexcept { return sigma_; }

  /// Coefficient (2/T_f) sigma_n (cos(omega t_n) - alpha_d/2) applied to W^n.
  double coefficient(int n) const noexcept { return coef_[n]; }
  const std::vector<double>& coefficients() const noexcept { return coef_; }

 private:
  double omega_ = 1.0;
  int n_periods_ = 1;
  int n_steps_ = 1;
  double tf_ = 0.0;
  double dt_ = 0.0;
  double alpha_d_ = 0.5;
  std::vector<double> sigma_;
  std::vector<double> coef_;
};

/// (2/T_f) sum_n sigma_n (cos(omega t_n) - alpha_d/2) cos(lambda_t t_n).
double beta_discrete(double lambda_t, const FilterSpec& spec);

/// beta_discrete(lambda_tilde(lambda, dt, scheme)).
double beta_tilde_d(double lambda, const FilterSpec& spec, SchemeKind scheme);

/// Reduced target frequency that recentres the implicit filter peak on omega.
/// Throws DomainError for n_its <= 4.
double adjusted_omega(double omega, int n_its);

}  // namespace eigenwave
