#include "eigenwave/eigensolve.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "eigenwave/errors.hpp"

namespace eigenwave {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Householder reduction to tridiagonal form (EISPACK tred2 ordering).
void tred2(DenseMatrix& V, std::vector<double>& d, std::vector<double>& e) {
  const int n = static_cast<int>(V.rows());
  for (int j = 0; j < n; ++j) d[j] = V(n - 1, j);
  for (int i = n - 1; i > 0; --i) {
    double scale = 0.0, h = 0.0;
    for (int k = 0; k < i; ++k) scale += std::abs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (int j = 0; j < i; ++j) {
        d[j] = V(i - 1, j);
        V(i, j) = 0.0;
        V(j, i) = 0.0;
      }
    } else {
      for (int k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (int j = 0; j < i; ++j) e[j] = 0.0;
      for (int j = 0; j < i; ++j) {
        f = d[j];
        V(j, i) = f;
        g = e[j] + V(j, j) * f;
        for (int k = j + 1; k <= i - 1; ++k) {
          g += V(k, j) * d[k];
          e[k] += V(k, j) * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (int j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (int j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (int j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (int k = j; k <= i - 1; ++k) V(k, j) -= (f * e[k] + g * d[k]);
        d[j] = V(i - 1, j);
        V(i, j) = 0.0;
      }
    }
    d[i] = h;
  }
  for (int i = 0; i < n - 1; ++i) {
    V(n - 1, i) = V(i, i);
    V(i, i) = 1.0;
    const double h = d[i + 1];
    if (h != 0.0) {
      for (int k = 0; k <= i; ++k) d[k] = V(k, i + 1) / h;
      for (int j = 0; j <= i; ++j) {
        double g = 0.0;
        for (int k = 0; k <= i; ++k) g += V(k, i + 1) * V(k, j);
        for (int k = 0; k <= i; ++k) V(k, j) -= g * d[k];
      }
    }
    for (int k = 0; k <= i; ++k) V(k, i + 1) = 0.0;
  }
  for (int j = 0; j < n; ++j) {
    d[j] = V(n - 1, j);
    V(n - 1, j) = 0.0;
  }
  V(n - 1, n - 1) = 1.0;
  e[0] = 0.0;
}

// Implicit-shift QL on the tridiagonal (d, e), accumulating into V.
void tql2(DenseMatrix& V, std::vector<double>& d, std::vector<double>& e) {
  const int n = static_cast<int>(V.rows());
  for (int i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;
  double f = 0.0, tst1 = 0.0;
  const int max_iter = 30 * std::max(n, 1);
  for (int l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    int m = l;
    while (m < n) {
      if (std::abs(e[m]) <= kEps * tst1) break;
      ++m;
    }
    if (m > l) {
      int iter = 0;
      do {
        if (++iter > max_iter) throw NumericalError("symmetric eigensolver: QL did not converge");
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (int i = l + 2; i < n; ++i) d[i] -= h;
        f += h;
        p = d[m];
        double c = 1.0, c2 = c, c3 = c;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (int i = m - 1; i >= l; --i) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = std::hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);
          double* vi = &V(0, i);
          double* vi1 = &V(0, i + 1);
          for (int k = 0; k < n; ++k) {
            h = vi1[k];
            vi1[k] = s * vi[k] + c * h;
            vi[k] = c * vi[k] - s * h;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > kEps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

// Indices sorted by descending |value|, ties by descending value then index.
std::vector<int> order_by_magnitude(const std::vector<double>& v) {
  std::vector<int> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    const double ma = std::abs(v[a]), mb = std::abs(v[b]);
    if (ma != mb) return ma > mb;
    return v[a] > v[b];
  });
  return idx;
}

// Orthogonalize w against the first `count` columns of Q, twice.
void project_out(const DenseMatrix& Q, std::size_t count, std::span<double> w,
                 std::span<double> coef = {}) {
  for (int pass = 0; pass < 2; ++pass)
    for (std::size_t i = 0; i < count; ++i) {
      const double c = dot(Q.col(i), w);
      axpy(-c, Q.col(i), w);
      if (!coef.empty()) coef[i] += c;
    }
}

DenseMatrix symmetric_part(const DenseMatrix& H, int m) {
  DenseMatrix T(m, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) T(i, j) = 0.5 * (H(i, j) + H(j, i));
  return T;
}

void check_symmetry(const DenseMatrix& H, int m, const char* who, double tol) {
  double asym = 0.0, scale = 0.0;
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) {
      asym = std::max(asym, std::abs(H(i, j) - H(j, i)));
      scale = std::max(scale, std::abs(H(i, j)));
    }
  if (asym > tol * std::max(scale, kEps)) {
    std::ostringstream os;
    os << who << ": projected matrix asymmetry " << asym << " exceeds " << tol << " * " << scale
       << "; the operator is not symmetric";
    throw NumericalError(os.str());
  }
}

// Rayleigh-Ritz with L on the span of the returned vectors. Modes whose
// filter values nearly coincide are mixed by S but have well separated lambda,
// so this recovers them from an accurate joint span.
void laplacian_rayleigh_ritz(EigenSolveResult& r, const DiscreteLaplacian& L) {
  const std::size_t n = r.pairs.front().vector.size();
  const std::size_t k = r.pairs.size();
  DenseMatrix Q(n, k);
  for (std::size_t c = 0; c < k; ++c) {
    auto col = Q.col(c);
    std::copy(r.pairs[c].vector.begin(), r.pairs[c].vector.end(), col.begin());
    project_out(Q, c, col);
    const double nrm = norm2(col);
    // A dependent set means the pairs are not distinct; leave them alone.
    if (!(nrm > 1e-6)) return;
    scale(1.0 / nrm, col);
  }
  DenseMatrix LQ(n, k);
  GridFunction scratch;
  for (std::size_t c = 0; c < k; ++c) L.apply_active(Q.col(c), LQ.col(c), scratch);
  const SymmetricEigen eig = small_symmetric_eig(symmetric_part(Q.transpose() * LQ, int(k)), 1.0);
  std::vector<EigenPair> out(k);
  for (std::size_t j = 0; j < k; ++j) {
    EigenPair& p = out[j];
    p.vector.assign(n, 0.0);
    for (std::size_t c = 0; c < k; ++c) {
      const double y = eig.vectors(c, j);
      axpy(y, Q.col(c), p.vector);
      p.beta += y * y * r.pairs[c].beta;
      p.residual += std::abs(y) * r.pairs[c].residual;
    }
    scale(1.0 / norm2(p.vector), p.vector);
  }
  r.pairs = std::move(out);
  std::stable_sort(r.pairs.begin(), r.pairs.end(), [](const EigenPair& a, const EigenPair& b) {
    const double ma = std::abs(a.beta), mb = std::abs(b.beta);
    if (ma != mb) return ma > mb;
    return a.beta > b.beta;
  });
}

void finish_pairs(EigenSolveResult& r, const DiscreteLaplacian* L) {
  std::stable_sort(r.pairs.begin(), r.pairs.end(), [](const EigenPair& a, const EigenPair& b) {
    const double ma = std::abs(a.beta), mb = std::abs(b.beta);
    if (ma != mb) return ma > mb;
    return a.beta > b.beta;
  });
  if (!L) return;
  if (r.pairs.size() >= 2) laplacian_rayleigh_ritz(r, *L);
  for (auto& p : r.pairs) p.lambda = rayleigh_lambda(*L, p.vector);
}

}  // namespace

SymmetricEigen small_symmetric_eig(const DenseMatrix& a, double sym_tol, std::size_t cap) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw DimensionError("symmetric eig: matrix is not square");
  if (n > cap) throw ResourceError("symmetric eig: size exceeds cap");
  SymmetricEigen out;
  if (n == 0) return out;
  const double scale = a.max_abs();
  if (a.asymmetry() > sym_tol * std::max(scale, std::numeric_limits<double>::min()))
    throw DomainError("symmetric eig: matrix asymmetry exceeds tolerance");
  DenseMatrix V(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) V(i, j) = 0.5 * (a(i, j) + a(j, i));
  std::vector<double> d(n), e(n);
  if (n == 1) {
    out.values = {V(0, 0)};
    out.vectors = DenseMatrix::identity(1);
    return out;
  }
  tred2(V, d, e);
  tql2(V, d, e);
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return d[x] < d[y]; });
  out.values.resize(n);
  out.vectors = DenseMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = d[idx[j]];
    std::copy(V.col(idx[j]).begin(), V.col(idx[j]).end(), out.vectors.col(j).begin());
  }
  return out;
}

double rayleigh_lambda(const DiscreteLaplacian& L, std::span<const double> phi) {
  const double pp = dot(phi, phi);
  if (!(pp > 0.0)) throw DomainError("rayleigh_lambda: zero vector");
  std::vector<double> lp(phi.size());
  L.apply_active(phi, lp);
  const double rad = -dot(phi, lp) / pp;
  if (rad < 0.0) {
    if (rad > -1e-12 * L.max_symbol()) return 0.0;
    throw DomainError("rayleigh_lambda: positive Rayleigh quotient " + std::to_string(-rad) +
                      " (vector is not a physical mode)");
  }
  return std::sqrt(rad);
}

EigenSolveResult power_iteration(LinearOperator& op, std::span<const double> v0, double tol,
                                 int max_iters, const DiscreteLaplacian* L) {
  const std::size_t n = op.size();
  if (v0.size() != n) throw DimensionError("power iteration: start vector length mismatch");
  if (max_iters < 1) throw ConfigError("power iteration: max_iters must be at least 1");
  std::vector<double> v(v0.begin(), v0.end()), w(n);
  const double nv = norm2(v);
  if (!(nv > 0.0)) throw ConfigError("power iteration: start vector is zero");
  scale(1.0 / nv, v);
  EigenSolveResult r;
  const std::int64_t a0 = op.applies();
  std::vector<double> history;
  double beta_prev = std::numeric_limits<double>::quiet_NaN();
  for (int k = 1; k <= max_iters; ++k) {
    op.apply(v, w);
    const double beta = dot(w, v);
    history.push_back(beta);
    double res2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) res2 += (w[i] - beta * v[i]) * (w[i] - beta * v[i]);
    const double res = std::sqrt(res2);
    r.residual_history.push_back(res);
    const bool done = res <= tol * std::abs(beta) ||
                      (k > 1 && std::abs(beta - beta_prev) <= tol * std::abs(beta));
    const double nw = norm2(w);
    if (!(nw > 0.0)) throw NumericalError("power iteration: S v vanished");
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / nw;
    beta_prev = beta;
    if (done) {
      r.iterations = k;
      r.converged = true;
      r.applies = op.applies() - a0;
      r.pairs.push_back({beta, 0.0, res, v});
      finish_pairs(r, L);
      return r;
    }
  }
  std::ostringstream os;
  os.precision(12);
  os << "power iteration: no convergence in " << max_iters << " iterations; last betas";
  for (std::size_t i = history.size() > 5 ? history.size() - 5 : 0; i < history.size(); ++i)
    os << ' ' << history[i];
  throw NonconvergenceError(os.str());
}

ArnoldiFactorization::ArnoldiFactorization(std::size_t n, int capacity,
                                           std::span<const double> start)
    : V(n, capacity), H(capacity, capacity), f(start.begin(), start.end()) {
  if (start.size() != n) throw DimensionError("arnoldi: start vector length mismatch");
  if (capacity < 1) throw ConfigError("arnoldi: capacity must be at least 1");
}

double ArnoldiFactorization::orthogonality_error() const {
  double e = 0.0;
  for (int j = 0; j < m; ++j)
    for (int i = 0; i <= j; ++i)
      e = std::max(e, std::abs(dot(V.col(i), V.col(j)) - (i == j ? 1.0 : 0.0)));
  return e;
}

double ArnoldiFactorization::asymmetry() const {
  double e = 0.0;
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < j; ++i) e = std::max(e, std::abs(H(i, j) - H(j, i)));
  return e;
}

double ArnoldiFactorization::relation_error(LinearOperator& op) const {
  const std::size_t n = V.rows();
  std::vector<double> w(n);
  double e = 0.0;
  for (int j = 0; j < m; ++j) {
    op.apply(V.col(j), w);
    for (int i = 0; i < m; ++i) axpy(-H(i, j), V.col(i), w);
    const double bj = b.empty() ? (j == m - 1 ? 1.0 : 0.0) : b[j];
    axpy(-bj, f, w);
    e = std::max(e, norm_inf(w));
  }
  return e;
}

void arnoldi_expand(ArnoldiFactorization& fact, LinearOperator& op, int to_m,
                    const DenseMatrix* locked, SplitMix64* rng) {
  const std::size_t n = fact.V.rows();
  if (to_m > fact.capacity()) throw ConfigError("arnoldi: requested size exceeds capacity");
  const std::size_t nl = locked ? locked->cols() : 0;
  std::vector<double> w(n), h(static_cast<std::size_t>(fact.capacity()));
  while (fact.m < to_m) {
    const int j = fact.m;
    const double fn = norm2(fact.f);
    auto vj = fact.V.col(j);
    if (fact.breakdown || !(fn > 0.0)) {
      if (!rng) return;
      // New direction, orthogonal to everything, coupled by zero.
      for (int attempt = 0;; ++attempt) {
        rng->fill(vj);
        const double n0 = norm2(vj);
        if (locked) project_out(*locked, nl, vj);
        project_out(fact.V, j, vj);
        const double n1 = norm2(vj);
        if (n1 > 1e-8 * n0) {
          scale(1.0 / n1, vj);
          break;
        }
        if (attempt > 10) throw NumericalError("arnoldi: cannot extend basis (space exhausted)");
      }
      for (int i = 0; i < j; ++i) fact.H(j, i) = 0.0;
      fact.breakdown = false;
    } else {
      for (std::size_t i = 0; i < n; ++i) vj[i] = fact.f[i] / fn;
      if (!fact.b.empty()) {
        for (int i = 0; i < j; ++i) fact.H(j, i) = fn * fact.b[i];
      } else if (j > 0) {
        fact.H(j, j - 1) = fn;
      }
    }
    fact.b.clear();
    op.apply(vj, w);
    const double wn = norm2(w);
    if (locked) project_out(*locked, nl, w);
    std::fill(h.begin(), h.end(), 0.0);
    project_out(fact.V, static_cast<std::size_t>(j) + 1, w, h);
    for (int i = 0; i <= j; ++i) fact.H(i, j) = h[i];
    fact.f.assign(w.begin(), w.end());
    fact.m = j + 1;
    if (norm2(w) <= 1e-12 * wn || wn == 0.0) {
      fact.breakdown = true;
      if (!rng) return;
    }
  }
}

// Krylov size of the pass that looks for missed repeated eigenvalues.
constexpr int kCheckSize = 10;

EigenSolveResult implicit_restart_solve(LinearOperator& op, const RestartOptions& opt,
                                        const DiscreteLaplacian* L) {
  const std::size_t n = op.size();
  const int nr = opt.n_requested;
  if (nr < 1) throw ConfigError("arnoldi: n_requested must be at least 1");
  const int na = opt.n_arnoldi > 0 ? opt.n_arnoldi : 2 * nr + 1;
  if (na < nr + 1) throw ConfigError("arnoldi: n_arnoldi must exceed n_requested");
  if (static_cast<std::size_t>(na) > n)
    throw ConfigError("arnoldi: subspace size " + std::to_string(na) + " exceeds problem size " +
                      std::to_string(n));
  if (!(opt.tol > 0.0)) throw ConfigError("arnoldi: tol must be positive");

  SplitMix64 rng(opt.seed);
  std::vector<double> start(n);
  rng.fill(start);
  ArnoldiFactorization fact(n, na, start);
  DenseMatrix X(n, 0);
  EigenSolveResult result;
  const std::int64_t a0 = op.applies();
  std::vector<double> tmp(n);

  auto lock = [&](std::span<const double> x, double beta, double res) {
    DenseMatrix grown(n, X.cols() + 1);
    std::copy(X.data().begin(), X.data().end(), grown.data().begin());
    std::copy(x.begin(), x.end(), grown.col(X.cols()).begin());
    X = std::move(grown);
    result.pairs.push_back({beta, 0.0, res, std::vector<double>(x.begin(), x.end())});
  };

  // A Krylov space holds one direction per eigenspace, so a repeated eigenvalue
  // surfaces only through roundoff. Once the target looks met, one pass seeded
  // with a fresh random direction checks for a dominant value that was missed.
  int target = nr;
  bool checking = false, verified = false;
  double weakest = 0.0;  // N_r-th largest locked |beta| when the check starts
  for (int restart = 0;; ++restart) {
    const int nl = static_cast<int>(X.cols());
    // Pairs locked beyond the request do not shrink the active room.
    const int m_max = std::min(na - std::min(nl, nr), static_cast<int>(n) - nl);
    if (m_max < 2) throw ConfigError("arnoldi: locked pairs fill the subspace; raise n_arnoldi");
    const int want = target - nl;
    arnoldi_expand(fact, op, checking ? std::min(m_max, kCheckSize) : m_max, &X, &rng);
    const int m = fact.m;
    check_symmetry(fact.H, m, "arnoldi", opt.symmetry_tol);
    const SymmetricEigen eig = small_symmetric_eig(symmetric_part(fact.H, m), 1.0);
    const std::vector<int> rank = order_by_magnitude(eig.values);
    const double fn = norm2(fact.f);
    auto estimate = [&](int i) { return fn * std::abs(eig.vectors(m - 1, i)); };
    auto converged = [&](int i) {
      return estimate(i) <= opt.tol * std::max(std::abs(eig.values[i]), kEps);
    };
    // Eigenvalue error bound min(r, r^2/gap) for a symmetric Ritz pair.
    auto ritz_bound = [&](int i) {
      double gap = std::numeric_limits<double>::infinity();
      for (int j = 0; j < m; ++j)
        if (j != i) gap = std::min(gap, std::abs(eig.values[i] - eig.values[j]));
      const double r = estimate(i);
      return gap > 0.0 ? std::min(r, r * r / gap) : r;
    };
    // A missed copy repeats the value of a locked pair. It counts once the
    // check resolves it, or once the Ritz value itself passes the weakest
    // locked value (interlacing then puts an eigenvalue beyond it).
    auto missed_copy = [&](int i) {
      const double b = ritz_bound(i), t = std::abs(eig.values[i]);
      if (t + b <= (1.0 - 1e-6) * weakest) return false;
      if (b > 1e-4 * t && t <= weakest) return false;
      for (const EigenPair& p : result.pairs)
        if (std::abs(eig.values[i] - p.beta) <= b + 1e-6 * std::abs(p.beta)) return true;
      return false;
    };
    auto ritz_vector = [&](int i, std::span<double> out) {
      std::fill(out.begin(), out.end(), 0.0);
      for (int k = 0; k < m; ++k) axpy(eig.vectors(k, i), fact.V.col(k), out);
    };

    std::vector<char> taken(m, 0);
    int newly = 0;
    for (int r = 0; r < want; ++r) {
      const int i = rank[r];
      if (!converged(i)) continue;
      ritz_vector(i, tmp);
      scale(1.0 / norm2(tmp), tmp);
      lock(tmp, eig.values[i], estimate(i));
      taken[i] = 1;
      ++newly;
    }
    const int nl_new = nl + newly;
    int want_new = target - nl_new;
    if (checking && want_new <= 0) {
      checking = false;
      int missed = 0;
      for (int i = 0; i < m; ++i)
        if (!taken[i] && missed_copy(i)) ++missed;
      if (missed > 0 && nl_new + missed <= na - 2) {
        target = nl_new + missed;
        want_new = missed;
        verified = false;
      }
    }
    const int m_next = std::min(na - std::min(nl_new, nr), static_cast<int>(n) - nl_new);
    const bool verify = kCheckSize > 0 && want_new <= 0 && !verified && restart < opt.max_restarts;
    // Keep the remaining wanted directions plus two thirds of the spare room.
    const int keep = std::min(m_next - 1, want_new + std::max(0, 2 * (m_next - want_new) / 3));

    if (want_new <= 0) {
      // Further converged pairs from the kept set; before a check they are
      // locked so the check start is orthogonal to them.
      if (verify) {
        std::vector<double> mags;
        for (const EigenPair& p : result.pairs) mags.push_back(std::abs(p.beta));
        std::nth_element(mags.begin(), mags.begin() + (nr - 1), mags.end(), std::greater<>());
        weakest = mags[nr - 1];
      }
      int seen = 0;
      for (int r = 0; r < m && seen < keep; ++r) {
        const int i = rank[r];
        if (taken[i]) continue;
        ++seen;
        if (!converged(i)) continue;
        if (verify && static_cast<int>(X.cols()) + 2 >= na) break;
        ritz_vector(i, tmp);
        scale(1.0 / norm2(tmp), tmp);
        if (verify) lock(tmp, eig.values[i], estimate(i));
        else result.pairs.push_back({eig.values[i], 0.0, estimate(i), tmp});
      }
    }
    if (verify) {
      // Fresh factorization from a random start orthogonal to the locked set.
      rng.fill(fact.f);
      project_out(X, X.cols(), fact.f);
      project_out(X, X.cols(), fact.f);
      fact.V = DenseMatrix(n, na);
      fact.H = DenseMatrix(na, na);
      fact.b.clear();
      fact.m = 0;
      fact.breakdown = false;
      checking = verified = true;
      continue;
    }
    if (want_new <= 0) {
      result.converged = true;
      result.iterations = restart;
      break;
    }
    if (restart >= opt.max_restarts) {
      std::ostringstream os;
      os << "arnoldi: restart budget " << opt.max_restarts << " exhausted with " << nl_new
         << " of " << nr << " pairs converged";
      result.diagnostic = os.str();
      result.iterations = restart;
      break;
    }

    // Thick restart onto the kept Ritz vectors.
    std::vector<int> kept;
    for (int r = 0; r < m && static_cast<int>(kept.size()) < keep; ++r)
      if (!taken[rank[r]]) kept.push_back(rank[r]);
    DenseMatrix U(n, kept.size());
    for (std::size_t c = 0; c < kept.size(); ++c) ritz_vector(kept[c], U.col(c));
    fact.V = DenseMatrix(n, na);
    fact.H = DenseMatrix(na, na);
    fact.b.assign(kept.size(), 0.0);
    for (std::size_t c = 0; c < kept.size(); ++c) {
      std::copy(U.col(c).begin(), U.col(c).end(), fact.V.col(c).begin());
      fact.H(c, c) = eig.values[kept[c]];
      fact.b[c] = eig.vectors(m - 1, kept[c]);
    }
    fact.m = static_cast<int>(kept.size());
    // Roundoff in the rotation: pull the kept block and f back to orthonormal.
    for (int c = 0; c < fact.m; ++c) {
      auto col = fact.V.col(c);
      project_out(X, X.cols(), col);
      project_out(fact.V, c, col);
      scale(1.0 / norm2(col), col);
    }
    project_out(X, X.cols(), fact.f);
    project_out(fact.V, fact.m, fact.f);
  }
  result.applies = op.applies() - a0;
  finish_pairs(result, L);
  return result;
}

EigenSolveResult simultaneous_iteration(LinearOperator& op, const SubspaceOptions& opt,
                                        const DiscreteLaplacian* L) {
  const std::size_t n = op.size();
  const int nr = opt.n_requested;
  if (nr < 1) throw ConfigError("subspace iteration: n_requested must be at least 1");
  const int nb = opt.n_block > 0 ? opt.n_block : 2 * nr + 1;
  if (nb < nr) throw ConfigError("subspace iteration: block smaller than n_requested");
  if (static_cast<std::size_t>(nb) > n)
    throw ConfigError("subspace iteration: block exceeds problem size");
  SplitMix64 rng(opt.seed);
  EigenSolveResult result;
  const std::int64_t a0 = op.applies();

  DenseMatrix V(n, nb), W(n, nb), Z(n, nb);
  // Orthonormalize columns of Z into V, reseeding collapsed ones.
  auto orthonormalize = [&](DenseMatrix& src) {
    for (int c = 0; c < nb; ++c) {
      auto col = src.col(c);
      double n0 = norm2(col);
      project_out(V, c, col);
      double n1 = norm2(col);
      int attempts = 0;
      while (!(n1 > 1e-10 * n0) || n1 == 0.0) {
        ++result.reseeds;
        if (++attempts > 10) throw NumericalError("subspace iteration: cannot restore block rank");
        rng.fill(col);
        n0 = norm2(col);
        project_out(V, c, col);
        n1 = norm2(col);
      }
      for (std::size_t i = 0; i < n; ++i) V(i, c) = col[i] / n1;
    }
  };
  for (int c = 0; c < nb; ++c) rng.fill(Z.col(c));
  orthonormalize(Z);

  std::vector<double> r(n), u(n);
  for (int sweep = 1;; ++sweep) {
    for (int c = 0; c < nb; ++c) op.apply(V.col(c), W.col(c));
    DenseMatrix H = V.transpose() * W;
    check_symmetry(H, nb, "subspace iteration", opt.symmetry_tol);
    const SymmetricEigen eig = small_symmetric_eig(symmetric_part(H, nb), 1.0);
    const std::vector<int> rank = order_by_magnitude(eig.values);
    std::vector<double> res(nb);
    bool all = true;
    for (int q = 0; q < nr; ++q) {
      const int i = rank[q];
      std::fill(r.begin(), r.end(), 0.0);
      for (int k = 0; k < nb; ++k) {
        axpy(eig.vectors(k, i), W.col(k), r);
        axpy(-eig.values[i] * eig.vectors(k, i), V.col(k), r);
      }
      res[q] = norm2(r);
      if (res[q] > opt.tol * std::max(std::abs(eig.values[i]), kEps)) all = false;
    }
    result.residual_history.push_back(res[nr - 1]);
    if (all || sweep >= opt.max_sweeps) {
      for (int q = 0; q < nr && all; ++q) {
        const int i = rank[q];
        std::fill(u.begin(), u.end(), 0.0);
        for (int k = 0; k < nb; ++k) axpy(eig.vectors(k, i), V.col(k), u);
        scale(1.0 / norm2(u), u);
        result.pairs.push_back({eig.values[i], 0.0, res[q], u});
      }
      result.converged = all;
      result.iterations = sweep;
      if (!all) {
        // Return the converged prefix only.
        for (int q = 0; q < nr; ++q) {
          const int i = rank[q];
          if (res[q] > opt.tol * std::max(std::abs(eig.values[i]), kEps)) continue;
          std::fill(u.begin(), u.end(), 0.0);
          for (int k = 0; k < nb; ++k) axpy(eig.vectors(k, i), V.col(k), u);
          scale(1.0 / norm2(u), u);
          result.pairs.push_back({eig.values[i], 0.0, res[q], u});
        }
        result.diagnostic = "subspace iteration: sweep budget " + std::to_string(opt.max_sweeps) +
                            " exhausted";
      }
      break;
    }
    // Next block: S applied to the Ritz vectors, in rank order.
    for (int c = 0; c < nb; ++c) {
      auto zc = Z.col(c);
      std::fill(zc.begin(), zc.end(), 0.0);
      const int i = rank[c];
      for (int k = 0; k < nb; ++k) axpy(eig.vectors(k, i), W.col(k), zc);
    }
    orthonormalize(Z);
  }
  result.applies = op.applies() - a0;
  finish_pairs(result, L);
  return result;
}

std::vector<double> verify_pairs(LinearOperator& op, const EigenSolveResult& result) {
  std::vector<double> out;
  std::vector<double> w(op.size());
  for (const auto& p : result.pairs) {
    op.apply(p.vector, w);
    axpy(-p.beta, p.vector, w);
    out.push_back(norm2(w));
  }
  return out;
}

}  // namespace eigenwave
