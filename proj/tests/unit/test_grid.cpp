#include <doctest.h>

#include "support.hpp"

#include "eigenwave/errors.hpp"

using namespace eigenwave;
using ewtest::unit_box;

TEST_SUITE("grid") {
  TEST_CASE("active counts") {
    const auto bc = BoundaryConditionSpec::dirichlet();
    const StructuredGrid g1 = unit_box(1, 10);
    const ActiveLayout l1(g1, bc);
    CHECK(l1.size() == 9);
    for (std::size_t a = 0; a < l1.size(); ++a)
      CHECK(g1.coordinate(0, int(a) + 1) == doctest::Approx(0.1 * (a + 1)).epsilon(1e-15));

    CHECK(ActiveLayout(unit_box(2, 128), bc).size() == 16129);

    const StructuredGrid g3 = unit_box(3, 20, 2);
    CHECK(ActiveLayout(g3, bc).size() == 6859);
    CHECK(g3.ghost(0) == 2);
    CHECK(g3.stored(2) == 25);
  }

  TEST_CASE("coordinates reach the upper extent") {
    std::array<AxisExtent, 1> ext{{{-0.3, 0.7}}};
    std::array<int, 1> n{7};
    const StructuredGrid g(1, ext, n, 1);
    CHECK(g.coordinate(0, 7) == 0.7);
    CHECK(g.coordinate(0, 0) == -0.3);
    CHECK(g.spacing(0) > 0.0);
  }

  TEST_CASE("construction rejects bad input") {
    std::array<AxisExtent, 2> ext{};
    std::array<int, 2> n{3, 8};
    CHECK_THROWS_AS(StructuredGrid(2, ext, n, 1), ConfigError);
    n = {8, 8};
    CHECK_THROWS_AS(StructuredGrid(2, ext, n, 3), ConfigError);
    CHECK_THROWS_AS(StructuredGrid(4, ext, n, 1), ConfigError);
    ext[1] = {1.0, 1.0};
    CHECK_THROWS_AS(StructuredGrid(2, ext, n, 1), ConfigError);
  }

  TEST_CASE("classification is a disjoint cover") {
    for (int dim = 1; dim <= 3; ++dim)
      for (int gw = 1; gw <= 2; ++gw) {
        const StructuredGrid g = unit_box(dim, 6, gw);
        std::size_t counts[3] = {0, 0, 0};
        for (std::size_t p = 0; p < g.num_points(); ++p) ++counts[int(g.classify(p))];
        CHECK(counts[0] + counts[1] + counts[2] == g.num_points());
        std::size_t interior = 1, all = 1;
        for (int d = 0; d < dim; ++d) {
          interior *= 5;
          all *= 7;
        }
        CHECK(counts[int(PointKind::Interior)] == interior);
        CHECK(counts[int(PointKind::Boundary)] == all - interior);
      }
  }

  TEST_CASE("multi_index inverts index") {
    const StructuredGrid g = unit_box(3, 4, 2);
    for (std::size_t p = 0; p < g.num_points(); ++p) {
      const auto m = g.multi_index(p);
      CHECK(g.index(m[0], m[1], m[2]) == p);
    }
  }

  TEST_CASE("pack of a constant field") {
    const StructuredGrid g = unit_box(1, 4);
    const GridFunction u(g, 1.0);
    const auto y = pack_active(u, ActiveLayout(g, BoundaryConditionSpec::dirichlet()));
    CHECK(y == std::vector<double>{1.0, 1.0, 1.0});
  }

  TEST_CASE("2D ordering is x fastest") {
    const StructuredGrid g = unit_box(2, 4);
    const ActiveLayout lay(g, BoundaryConditionSpec::dirichlet());
    GridFunction u(g);
    for (int j = 1; j <= 3; ++j)
      for (int i = 1; i <= 3; ++i) u.at(i, j) = 10 * j + i;
    const auto y = pack_active(u, lay);
    const std::vector<double> want{11, 12, 13, 21, 22, 23, 31, 32, 33};
    CHECK(y == want);
  }

  TEST_CASE("pack after unpack is the identity") {
    for (int dim = 1; dim <= 3; ++dim) {
      const StructuredGrid g = unit_box(dim, 8, 2);
      const ActiveLayout lay(g, BoundaryConditionSpec::dirichlet());
      const auto y = ewtest::random_vector(lay.size(), 7 + dim);
      CHECK(pack_active(unpack_active(y, lay), lay) == y);
    }
  }

  TEST_CASE("neumann round trip is exact up to the sqrt weight rounding") {
    for (int dim = 1; dim <= 3; ++dim) {
      const StructuredGrid g = unit_box(dim, 8, 2);
      const ActiveLayout lay(g, BoundaryConditionSpec::neumann());
      const auto y = ewtest::random_vector(lay.size(), 17 + dim);
      const auto back = pack_active(unpack_active(y, lay), lay);
      for (std::size_t a = 0; a < y.size(); ++a) {
        if (lay.sqrt_weight(a) == 1.0) CHECK(back[a] == y[a]);
        else CHECK(std::abs(back[a] - y[a]) <= 0x1.0p-52 * std::abs(y[a]));
      }
    }
  }

  TEST_CASE("unpack fills boundary and ghosts") {
    const StructuredGrid g = unit_box(1, 4);
    const std::vector<double> y{1, 2, 3};
    SUBCASE("dirichlet") {
      const GridFunction u = unpack_active(y, ActiveLayout(g, BoundaryConditionSpec::dirichlet()));
      CHECK(u.at(0) == 0.0);
      CHECK(u.at(4) == 0.0);
      CHECK(u.at(-1) == -1.0);
      CHECK(u.at(5) == -3.0);
    }
    SUBCASE("neumann") {
      // Boundary points are active, so y covers indices 0..4.
      const ActiveLayout lay(g, BoundaryConditionSpec::neumann());
      REQUIRE(lay.size() == 5);
      const std::vector<double> raw{5, 1, 2, 3, 6};
      GridFunction src(g);
      for (int i = 0; i <= 4; ++i) src.at(i) = raw[i];
      const GridFunction u = unpack_active(pack_active(src, lay), lay);
      CHECK(u.at(-1) == doctest::Approx(1.0));
      CHECK(u.at(5) == doctest::Approx(3.0));
      CHECK(u.at(0) == doctest::Approx(5.0));
    }
    SUBCASE("zero vector") {
      const GridFunction u =
          unpack_active(std::vector<double>(3, 0.0), ActiveLayout(g, BoundaryConditionSpec::dirichlet()));
      for (double v : u.values()) CHECK(v == 0.0);
    }
    SUBCASE("length mismatch") {
      CHECK_THROWS_AS(unpack_active(std::vector<double>(4), ActiveLayout(g, BoundaryConditionSpec::dirichlet())),
                      DimensionError);
    }
  }

  TEST_CASE("packing is deterministic") {
    const StructuredGrid g = unit_box(2, 16);
    const ActiveLayout a(g, BoundaryConditionSpec::neumann()), b(g, BoundaryConditionSpec::neumann());
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a.grid_index(i) == b.grid_index(i));
      CHECK(a.sqrt_weight(i) == b.sqrt_weight(i));
    }
  }

  TEST_CASE("coarsening halves cells") {
    const StructuredGrid g = unit_box(2, 32);
    const StructuredGrid c = g.coarsened();
    CHECK(c.cells(0) == 16);
    CHECK(c.spacing(1) == doctest::Approx(2 * g.spacing(1)));
  }
}
