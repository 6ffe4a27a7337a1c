#include "eigenwave/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>

#include "eigenwave/eigensolve.hpp"
#include "eigenwave/errors.hpp"

namespace eigenwave {

namespace {

struct AxisMode {
  int m;
  double theta;  // angle per grid index (discrete) or wavenumber (continuous)
  double mu;     // squared frequency contribution
  bool cosine;
};

enum class AxisType { DD, NN, DN, ND };

AxisType axis_type(const BoundaryConditionSpec& bc, int d) {
  const bool lo_d = bc.face(d, 0) == BoundaryKind::Dirichlet;
  const bool hi_d = bc.face(d, 1) == BoundaryKind::Dirichlet;
  if (lo_d && hi_d) return AxisType::DD;
  if (!lo_d && !hi_d) return AxisType::NN;
  return lo_d ? AxisType::DN : AxisType::ND;
}

// Pruned enumeration of sum_d mu_d <= cap over per-axis ascending lists.
template <class F>
void enumerate(const std::vector<std::vector<AxisMode>>& axes, double cap, F&& emit) {
  const int dim = static_cast<int>(axes.size());
  std::array<std::size_t, 3> idx{0, 0, 0};
  std::array<const AxisMode*, 3> pick{};
  auto rec = [&](auto&& self, int d, double acc) -> void {
    if (d == dim) {
      emit(pick, acc);
      return;
    }
    for (idx[d] = 0; idx[d] < axes[d].size(); ++idx[d]) {
      const double s = acc + axes[d][idx[d]].mu;
      if (s > cap) break;
      pick[d] = &axes[d][idx[d]];
      self(self, d + 1, s);
    }
  };
  rec(rec, 0, 0.0);
}

void sort_members(ReferenceSpectrum& ref) {
  std::vector<std::size_t> order(ref.lambda.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (ref.lambda[a] != ref.lambda[b]) return ref.lambda[a] < ref.lambda[b];
    return !ref.modes.empty() && ref.modes[a] < ref.modes[b];
  });
  auto permute = [&](auto& v) {
    if (v.empty()) return;
    std::remove_reference_t<decltype(v)> out;
    out.reserve(v.size());
    for (std::size_t i : order) out.push_back(std::move(v[i]));
    v = std::move(out);
  };
  permute(ref.lambda);
  permute(ref.modes);
  permute(ref.vectors);
}

void finalize_clusters(ReferenceSpectrum& ref, double tol) {
  ref.clusters = cluster_multiplicities(ref.lambda, tol);
  ref.cluster_of.assign(ref.lambda.size(), 0);
  for (std::size_t c = 0; c < ref.clusters.size(); ++c)
    for (std::size_t i = 0; i < ref.clusters[c].count; ++i) ref.cluster_of[ref.clusters[c].first + i] = c;
}

}  // namespace

const char* to_string(ReferenceKind kind) {
  switch (kind) {
    case ReferenceKind::AnalyticContinuous: return "analytic-continuous";
    case ReferenceKind::AnalyticDiscrete: return "analytic-discrete";
    case ReferenceKind::Dense: return "dense";
  }
  return "?";
}

std::size_t ReferenceSpectrum::nearest(double x) const {
  if (lambda.empty()) throw ConfigError("reference spectrum is empty");
  auto it = std::lower_bound(lambda.begin(), lambda.end(), x);
  std::size_t hi = static_cast<std::size_t>(it - lambda.begin());
  if (hi == lambda.size()) return hi - 1;
  if (hi == 0) return 0;
  return (x - lambda[hi - 1] <= lambda[hi] - x) ? hi - 1 : hi;
}

DenseMatrix ReferenceSpectrum::basis(std::size_t cluster) const {
  if (!has_vectors()) throw ConfigError("reference spectrum has no eigenvectors");
  const Cluster& c = clusters.at(cluster);
  const std::size_t n = vectors[c.first].size();
  DenseMatrix w(n, c.count);
  for (std::size_t j = 0; j < c.count; ++j) {
    const auto& v = vectors[c.first + j];
    if (v.empty()) throw ConfigError("reference eigenvector was not built for this cluster");
    std::copy(v.begin(), v.end(), w.col(j).begin());
  }
  return w;
}

std::vector<Cluster> cluster_multiplicities(std::span<const double> lambdas, double rel_tol) {
  std::vector<Cluster> out;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!out.empty()) {
      Cluster& c = out.back();
      const double prev = lambdas[i - 1];
      if (lambdas[i] - prev <= rel_tol * std::abs(lambdas[i])) {
        c.lambda = (c.lambda * c.count + lambdas[i]) / double(c.count + 1);
        ++c.count;
        continue;
      }
    }
    out.push_back({i, 1, lambdas[i]});
  }
  return out;
}

ReferenceSpectrum analytic_continuous_box(int dim, std::span<const AxisExtent> extents,
                                          const BoundaryConditionSpec& bc, double lambda_max,
                                          double cluster_tol) {
  if (dim < 1 || dim > 3 || extents.size() < static_cast<std::size_t>(dim))
    throw ConfigError("analytic_continuous_box: bad dimension");
  const double c2 = bc.wave_speed * bc.wave_speed;
  const double cap = lambda_max * lambda_max / c2;
  std::vector<std::vector<AxisMode>> axes(dim);
  for (int d = 0; d < dim; ++d) {
    const double len = extents[d].hi - extents[d].lo;
    const AxisType t = axis_type(bc, d);
    const int m0 = t == AxisType::NN ? 0 : 1;
    for (int m = m0;; ++m) {
      const double k = (t == AxisType::DD || t == AxisType::NN ? m : m - 0.5) * std::numbers::pi / len;
      if (k * k > cap) break;
      axes[d].push_back({m, k, k * k, t == AxisType::NN || t == AxisType::ND});
    }
  }
  ReferenceSpectrum ref;
  ref.kind = ReferenceKind::AnalyticContinuous;
  enumerate(axes, cap, [&](const std::array<const AxisMode*, 3>& pick, double mu) {
    std::array<int, 3> m{0, 0, 0};
    for (int d = 0; d < dim; ++d) m[d] = pick[d]->m;
    ref.lambda.push_back(std::sqrt(c2 * mu));
    ref.modes.push_back(m);
  });
  sort_members(ref);
  finalize_clusters(ref, cluster_tol);
  return ref;
}

ReferenceSpectrum analytic_discrete_box(const DiscreteLaplacian& L, double lambda_max,
                                        bool with_vectors, double cluster_tol) {
  const StructuredGrid& g = L.grid();
  const int dim = g.dim();
  const double c2 = L.wave_speed() * L.wave_speed();
  const double cap = std::isfinite(lambda_max) ? lambda_max * lambda_max / c2
                                               : std::numeric_limits<double>::infinity();
  std::vector<std::vector<AxisMode>> axes(dim);
  for (int d = 0; d < dim; ++d) {
    const int n = g.cells(d);
    const AxisType t = axis_type(L.bc(), d);
    int lo = 1, hi = n - 1;
    if (t == AxisType::NN) lo = 0, hi = n;
    if (t == AxisType::DN || t == AxisType::ND) lo = 1, hi = n;
    for (int m = lo; m <= hi; ++m) {
      const double theta =
          (t == AxisType::DD || t == AxisType::NN ? m : m - 0.5) * std::numbers::pi / n;
      axes[d].push_back({m, theta, stencil_symbol(L.order(), theta, g.spacing(d)),
                         t == AxisType::NN || t == AxisType::ND});
    }
    std::stable_sort(axes[d].begin(), axes[d].end(),
                     [](const AxisMode& a, const AxisMode& b) { return a.mu < b.mu; });
  }
  ReferenceSpectrum ref;
  ref.kind = ReferenceKind::AnalyticDiscrete;
  std::vector<std::array<AxisMode, 3>> picks;
  enumerate(axes, cap, [&](const std::array<const AxisMode*, 3>& pick, double mu) {
    std::array<int, 3> m{0, 0, 0};
    std::array<AxisMode, 3> pm{};
    for (int d = 0; d < dim; ++d) {
      m[d] = pick[d]->m;
      pm[d] = *pick[d];
    }
    ref.lambda.push_back(std::sqrt(c2 * mu));
    ref.modes.push_back(m);
    picks.push_back(pm);
  });
  if (with_vectors) {
    const ActiveLayout& lay = L.layout();
    ref.vectors.resize(ref.lambda.size());
    for (std::size_t q = 0; q < picks.size(); ++q) {
      std::vector<double> v(lay.size());
      std::size_t a = 0;
      for (int k = lay.first(2); k <= lay.last(2); ++k)
        for (int j = lay.first(1); j <= lay.last(1); ++j)
          for (int i = lay.first(0); i <= lay.last(0); ++i, ++a) {
            const std::array<int, 3> idx{i, j, k};
            double val = lay.sqrt_weight(a);
            for (int d = 0; d < dim; ++d) {
              const double x = picks[q][d].theta * idx[d];
              val *= picks[q][d].cosine ? std::cos(x) : std::sin(x);
            }
            v[a] = val;
          }
      scale(1.0 / norm2(v), v);
      ref.vectors[q] = std::move(v);
    }
  }
  sort_members(ref);
  finalize_clusters(ref, cluster_tol);
  if (with_vectors) {
    // Orthonormalize within clusters (a no-op up to roundoff for symmetric L).
    for (const Cluster& c : ref.clusters)
      for (std::size_t j = 0; j < c.count; ++j) {
        auto& v = ref.vectors[c.first + j];
        for (int pass = 0; pass < 2; ++pass)
          for (std::size_t i = 0; i < j; ++i) {
            const auto& u = ref.vectors[c.first + i];
            axpy(-dot(u, v), u, v);
          }
        scale(1.0 / norm2(v), v);
      }
  }
  return ref;
}

ReferenceSpectrum dense_reference(const DiscreteLaplacian& L, std::size_t cap, double cluster_tol) {
  if (!L.symmetric()) throw ConfigError("dense_reference: operator is not symmetric");
  const DenseMatrix a = assemble_dense(L, cap);
  const SymmetricEigen eig = small_symmetric_eig(a, 1e-10, cap);
  const std::size_t n = eig.values.size();
  const double scale_l = std::max(L.max_symbol(), 1.0);
  ReferenceSpectrum ref;
  ref.kind = ReferenceKind::Dense;
  ref.lambda.resize(n);
  ref.vectors.resize(n);
  // Ascending eigenvalues of L are descending lambda; walk backwards.
  for (std::size_t q = 0; q < n; ++q) {
    const std::size_t src = n - 1 - q;
    const double mu = eig.values[src];
    if (mu > 1e-10 * scale_l)
      throw InvariantError("dense_reference: discrete Laplacian has a positive eigenvalue " +
                           std::to_string(mu));
    ref.lambda[q] = std::sqrt(std::max(0.0, -mu));
    const auto col = eig.vectors.col(src);
    ref.vectors[q].assign(col.begin(), col.end());
  }
  sort_members(ref);
  finalize_clusters(ref, cluster_tol);
  return ref;
}

double eigenspace_distance(std::span<const double> v, const DenseMatrix& W) {
  if (W.cols() == 0) throw DomainError("eigenspace_distance: empty basis");
  if (W.rows() != v.size()) throw DimensionError("eigenspace_distance: length mismatch");
  std::vector<double> r(v.begin(), v.end());
  for (std::size_t j = 0; j < W.cols(); ++j) axpy(-dot(W.col(j), v), W.col(j), r);
  return norm_inf(r);
}

void write_reference_csv(std::ostream& os, const ReferenceSpectrum& ref) {
  os << "k,lambda,mult\n";
  char buf[64];
  for (std::size_t i = 0; i < ref.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.6f,%zu\n", i + 1, ref.lambda[i],
                  ref.clusters[ref.cluster_of[i]].count);
    os << buf;
  }
}

}  // namespace eigenwave
