#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "support.hpp"

#include "eigenwave/errors.hpp"
#include "eigenwave/oracle.hpp"

using namespace eigenwave;
using namespace ewtest;

namespace {

constexpr double pi = std::numbers::pi;

double max_orthonormality_error(const ReferenceSpectrum& r, const Cluster& c) {
  double e = 0.0;
  for (std::size_t i = 0; i < c.count; ++i)
    for (std::size_t j = 0; j < c.count; ++j)
      e = std::max(e, std::abs(dot(r.vectors[c.first + i], r.vectors[c.first + j]) - (i == j)));
  return e;
}

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("continuous spectra") {
    std::array<AxisExtent, 3> ext{};
    const auto bc = BoundaryConditionSpec::dirichlet();
    const ReferenceSpectrum sq = analytic_continuous_box(2, ext, bc, 20.0);
    CHECK(sq.lambda[0] == doctest::Approx(pi * std::sqrt(2.0)).epsilon(1e-15));
    CHECK(sq.lambda[0] == doctest::Approx(4.442883).epsilon(1e-6));
    const std::size_t k = sq.nearest(pi * std::sqrt(5.0));
    CHECK(sq.clusters[sq.cluster_of[k]].count == 2);
    const ReferenceSpectrum iv = analytic_continuous_box(1, ext, bc, 30.0);
    for (std::size_t m = 0; m < iv.size(); ++m) CHECK(iv.lambda[m] == doctest::Approx((m + 1) * pi));
    CHECK(iv.size() == 9);
  }

  TEST_CASE("discrete values on 128^2") {
    const DiscreteLaplacian L2 = box_laplacian(2, 128, 2), L4 = box_laplacian(2, 128, 4);
    const ReferenceSpectrum r2 = analytic_discrete_box(L2, 8.0, false);
    const ReferenceSpectrum r4 = analytic_discrete_box(L4, 8.0, false);
    const double want = pi * std::sqrt(5.0);
    const double l2 = r2.lambda[r2.nearest(want)], l4 = r4.lambda[r4.nearest(want)];
    CHECK(std::abs(l2 - 7.024215) <= 5e-7);
    CHECK(std::abs(l4 - want) < std::abs(l2 - want));
  }

  TEST_CASE("discrete eigen-relation for 20 modes") {
    for (int order : {2, 4}) {
      const DiscreteLaplacian L = box_laplacian(2, 24, order);
      const ReferenceSpectrum r = analytic_discrete_box(L, 30.0);
      REQUIRE(r.size() >= 20);
      std::vector<double> lv(L.active_size());
      for (std::size_t q = 0; q < 20; ++q) {
        const auto& v = r.vectors[q];
        L.apply_active(v, lv);
        const double l2 = r.lambda[q] * r.lambda[q];
        double res = 0.0;
        for (std::size_t a = 0; a < v.size(); ++a) res = std::max(res, std::abs(lv[a] + l2 * v[a]));
        CHECK(res <= 1e-10 * l2 * norm_inf(v));
      }
      for (const Cluster& c : r.clusters) CHECK(max_orthonormality_error(r, c) <= 1e-10);
    }
  }

  TEST_CASE("dense and analytic oracles agree") {
    for (auto kind : {BoundaryKind::Dirichlet, BoundaryKind::Neumann}) {
      const DiscreteLaplacian L = box_laplacian(2, 16, 2, BoundaryConditionSpec::all(kind));
      const ReferenceSpectrum d = dense_reference(L);
      const ReferenceSpectrum a = analytic_discrete_box(L, INFINITY, false);
      REQUIRE(d.size() == a.size());
      for (std::size_t i = 0; i < d.size(); ++i) {
        if (a.lambda[i] == 0.0) {
          // Constant mode: the square root amplifies roundoff, compare squares.
          CHECK(d.lambda[i] * d.lambda[i] <= 1e-11 * L.max_symbol());
          continue;
        }
        CHECK(std::abs(d.lambda[i] - a.lambda[i]) <= 1e-11 * std::max(a.lambda[i], 1.0));
      }
      REQUIRE(d.clusters.size() == a.clusters.size());
      for (std::size_t c = 0; c < d.clusters.size(); ++c) CHECK(d.clusters[c].count == a.clusters[c].count);
    }
    const DiscreteLaplacian L4 = box_laplacian(2, 12, 4);
    const ReferenceSpectrum d4 = dense_reference(L4), a4 = analytic_discrete_box(L4, INFINITY, false);
    for (std::size_t i = 0; i < d4.size(); ++i) CHECK(std::abs(d4.lambda[i] - a4.lambda[i]) <= 1e-11 * a4.lambda[i]);
  }

  TEST_CASE("1D tridiagonal spectrum") {
    const int n = 8;
    const double h = 1.0 / n;
    const ReferenceSpectrum d = dense_reference(box_laplacian(1, n));
    REQUIRE(d.size() == 7);
    for (int m = 1; m <= 7; ++m) CHECK(d.lambda[m - 1] == doctest::Approx(2 / h * std::sin(m * pi * h / 2)).epsilon(1e-13));
  }

  TEST_CASE("dense oracle rejects nonsymmetric operators") {
    CHECK_THROWS_AS(dense_reference(box_laplacian(2, 8, 4, BoundaryConditionSpec::neumann())), ConfigError);
  }

  TEST_CASE("clustering") {
    const std::vector<double> l{1.0, 1.0 + 1e-12, 2.0};
    const auto c = cluster_multiplicities(l);
    REQUIRE(c.size() == 2);
    CHECK(c[0].count == 2);
    CHECK(c[1].count == 1);
    const std::vector<double> near{1.0, 1.0 + 1e-6};
    CHECK(cluster_multiplicities(near).size() == 2);
    CHECK(cluster_multiplicities(near, 1e-5).size() == 1);

    const DiscreteLaplacian L = box_laplacian(2, 32);
    const ReferenceSpectrum r = analytic_discrete_box(L, 25.0, false);
    for (std::size_t i = 0; i < r.size(); ++i) {
      const auto m = r.modes[i];
      CHECK(r.clusters[r.cluster_of[i]].count == (m[0] == m[1] ? 1u : 2u));
    }
  }

  TEST_CASE("eigenspace distance") {
    const DiscreteLaplacian L = box_laplacian(2, 16);
    const ReferenceSpectrum r = analytic_discrete_box(L, 12.0);
    const std::size_t c = r.cluster_of[r.nearest(pi * std::sqrt(5.0))];
    const DenseMatrix W = r.basis(c);
    REQUIRE(W.cols() == 2);
    std::vector<double> in(W.rows());
    axpy(0.6, W.col(0), in);
    axpy(-0.8, W.col(1), in);
    CHECK(eigenspace_distance(in, W) <= 1e-15);
    const auto& out = r.vectors[0];  // (1,1) mode, orthogonal to the cluster
    CHECK(eigenspace_distance(out, W) == doctest::Approx(norm_inf(out)).epsilon(1e-12));

    const auto v = random_vector(W.rows(), 6);
    const double t = 0.37;
    DenseMatrix Q(W.rows(), 2);
    for (std::size_t i = 0; i < W.rows(); ++i) {
      Q(i, 0) = std::cos(t) * W(i, 0) + std::sin(t) * W(i, 1);
      Q(i, 1) = -std::sin(t) * W(i, 0) + std::cos(t) * W(i, 1);
    }
    CHECK(eigenspace_distance(v, Q) == doctest::Approx(eigenspace_distance(v, W)).epsilon(1e-13));
    CHECK_THROWS_AS(eigenspace_distance(v, DenseMatrix(W.rows(), 0)), DomainError);
    CHECK_THROWS_AS(eigenspace_distance(std::vector<double>(3), W), DimensionError);
  }

  TEST_CASE("reference csv") {
    const ReferenceSpectrum r = analytic_discrete_box(box_laplacian(2, 16), 8.0, false);
    std::ostringstream os;
    write_reference_csv(os, r);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "k,lambda,mult");
    std::getline(is, line);
    CHECK(line.rfind("1,4.4", 0) == 0);
    CHECK(line.substr(line.size() - 2) == ",1");
    for (std::size_t i = 1; i < r.size(); ++i) CHECK(r.lambda[i - 1] <= r.lambda[i]);
  }
}
