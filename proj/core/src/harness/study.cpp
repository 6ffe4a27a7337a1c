#include "eigenwave/harness/study.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "eigenwave/errors.hpp"

namespace eigenwave {

SweepAxis parse_sweep_axis(const std::string& name) {
  if (name == "n_its") return SweepAxis::NIts;
  if (name == "n_periods") return SweepAxis::NPeriods;
  if (name == "n_requested") return SweepAxis::NRequested;
  if (name == "tolerance" || name == "tol") return SweepAxis::Tolerance;
  throw ConfigError("unknown sweep axis '" + name +
                    "' (expected n_its, n_periods, n_requested or tolerance)");
}

const char* to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::NIts: return "n_its";
    case SweepAxis::NPeriods: return "n_periods";
    case SweepAxis::NRequested: return "n_requested";
    case SweepAxis::Tolerance: return "tolerance";
  }
  return "?";
}

RunConfig apply_sweep_value(const RunConfig& base, SweepAxis axis, double value) {
  RunConfig c = base;
  auto as_int = [&]() {
    if (value != std::floor(value) || std::abs(value) > 1e9)
      throw ConfigError(std::string("sweep value for ") + to_string(axis) + " must be an integer");
    return static_cast<int>(value);
  };
  switch (axis) {
    case SweepAxis::NIts: c.n_its = as_int(); break;
    case SweepAxis::NPeriods: c.n_periods = as_int(); break;
    case SweepAxis::NRequested:
      c.n_requested = as_int();
      if (c.n_arnoldi != 0 && c.n_arnoldi <= c.n_requested) c.n_arnoldi = 0;
      break;
    case SweepAxis::Tolerance:
      // S carries noise at the solve tolerance; keep the Ritz test a decade above
      // it. Past 1e-5 loosely converged spares drift off their reference values.
      c.solver.tolerance = value;
      c.tol = std::max(base.tol, std::min(10.0 * value, 1e-5));
      break;
  }
  return c;
}

SweepTable study_sweep(SweepAxis axis, const std::vector<double>& values, const RunConfig& base) {
  SweepTable t;
  t.axis = axis;
  for (double v : values) {
    SweepPoint p;
    p.value = v;
    try {
      p.summary = run_case(apply_sweep_value(base, axis, v)).summary;
      p.ok = true;
    } catch (const Error& e) {
      p.error = e.what();
    }
    t.points.push_back(std::move(p));
  }
  return t;
}

void write_sweep_csv(std::ostream& os, const SweepTable& t) {
  os << "value,num-eigs,wave-solves,wave-solves-per-eig,time-steps-per-eig,max-eig-err,"
        "max-evect-err,max-eig-res,status\n";
  char buf[512];
  for (const SweepPoint& p : t.points) {
    const RunSummary& s = p.summary;
    std::snprintf(buf, sizeof buf, "%.6g,%d,%lld,%.6g,%.6g,%.5e,%.5e,%.5e,", p.value, s.num_eigs,
                  static_cast<long long>(s.wave_solves), s.wave_solves_per_eig,
                  s.time_steps_per_eig, s.max_eig_err, s.max_evect_err, s.max_eig_res);
    os << buf;
    if (p.ok) {
      os << "ok\n";
    } else {
      // Keep the row one line: commas and newlines would break the CSV.
      std::string msg = p.error;
      for (char& ch : msg)
        if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
      os << "error: " << msg << "\n";
    }
  }
}

std::vector<ScalingRow> scaling_study(const RunConfig& base, const std::vector<int>& levels,
                                      int repeats) {
  if (repeats < 1) throw ConfigError("scaling_study: repeats must be at least 1");
  std::vector<ScalingRow> rows;
  for (int n : levels) {
    RunConfig c = base;
    for (int d = 0; d < c.dim(); ++d) c.n_cells[d] = n;
    ScalingRow row;
    row.n = n;
    std::vector<double> times;
    for (int r = 0; r < repeats; ++r) {
      const RunReport rep = run_case(c);
      times.push_back(rep.summary.wall_seconds);
      if (r == 0) {
        row.num_eigs = rep.summary.num_eigs;
        row.wave_solves = rep.summary.wave_solves;
        row.unknowns = rep.pairs.empty() ? 0 : rep.pairs.front().vector.size();
        row.cycles_per_solve = rep.summary.linear_solves > 0
                                   ? double(rep.summary.linear_iterations) / rep.summary.linear_solves
                                   : 0.0;
        row.solver_note = rep.summary.solver_note;
      }
    }
    if (row.unknowns == 0) {
      const DiscreteLaplacian L(c.grid(), c.order, c.bc);
      row.unknowns = L.active_size();
    }
    std::sort(times.begin(), times.end());
    row.wall_seconds = times[times.size() / 2];
    for (double t : times)
      if (std::abs(t - row.wall_seconds) > 0.2 * row.wall_seconds) row.jitter = true;
    rows.push_back(row);
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0) rows[i].cpu_ratio = rows[i].wall_seconds / rows[i - 1].wall_seconds;
    const double per = rows[i].wall_seconds / double(rows[i].unknowns);
    const double per0 = rows[0].wall_seconds / double(rows[0].unknowns);
    rows[i].cpu_per_n = per / per0;
  }
  return rows;
}

void write_scaling_csv(std::ostream& os, const std::vector<ScalingRow>& rows) {
  os << "n,unknowns,num-eigs,wave-solves,cycles-per-solve,wall-seconds,cpu-ratio,cpu-per-n,"
        "jitter\n";
  char buf[256];
  for (const ScalingRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%zu,%d,%lld,%.3f,%.4f,%.3f,%.3f,%s\n", r.n, r.unknowns,
                  r.num_eigs, static_cast<long long>(r.wave_solves), r.cycles_per_solve,
                  r.wall_seconds, r.cpu_ratio, r.cpu_per_n, r.jitter ? "yes" : "no");
    os << buf;
  }
}

double cr_estimate(double beta_r, int n_periods) {
  if (!(beta_r >= 0.7 && beta_r < 1.0))
    throw DomainError("cr_estimate: beta_r must lie in [0.7, 1)");
  auto f = [&](double lam) { return beta(lam, 1.0, n_periods); };
  // Locate the first minimum to the right of the peak.
  const double step = 1e-3 / n_periods;
  double hi = 1.0;
  while (f(hi + step) < f(hi)) hi += step;
  if (f(hi) > beta_r) throw DomainError("cr_estimate: beta_r below the first branch");
  double lo = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > beta_r ? lo : hi) = mid;
  }
  const double delta = 0.5 * (lo + hi) - 1.0;
  return std::abs(f(1.0 + 2.0 * delta) / f(1.0 + delta));
}

double measured_cr(double tol, double wave_solves) {
  if (!(tol > 0.0 && tol < 1.0) || !(wave_solves > 0.0))
    throw DomainError("measured_cr: need 0 < tol < 1 and a positive wave-solve count");
  return std::pow(tol, 1.0 / wave_solves);
}

void emit_filter_curve(std::ostream& os, const FilterSpec& spec, SchemeKind scheme,
                       double lambda_max, int samples) {
  if (!(lambda_max > 0.0) || samples < 2)
    throw ConfigError("filter curve: need lambda_max > 0 and at least 2 samples");
  std::vector<double> lams;
  lams.reserve(samples + 1);
  for (int i = 0; i < samples; ++i) lams.push_back(lambda_max * i / (samples - 1));
  if (spec.omega() <= lambda_max) {
    auto it = std::lower_bound(lams.begin(), lams.end(), spec.omega());
    if (it == lams.end() || *it != spec.omega()) lams.insert(it, spec.omega());
  }
  os << "lambda,lambda/omega,beta,beta_tilde_d\n";
  char buf[256];
  for (double lam : lams) {
    double bd = std::numeric_limits<double>::quiet_NaN();
    try {
      bd = beta_tilde_d(lam, spec, scheme);
    } catch (const DomainError&) {
      // explicit scheme beyond its stability limit
    }
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.12e,%.12e\n", lam, lam / spec.omega(),
                  beta(lam, spec.omega(), spec.n_periods()), bd);
    os << buf;
  }
}

}  // namespace eigenwave
