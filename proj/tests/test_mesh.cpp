#include "doctest.h"
#include "radcon/mesh.hpp"

using namespace radcon;

TEST_CASE("1-D mesh: cells, spacing and endpoint faces") {
  BoxMesh mesh(1, {1.0, 0, 0}, {4, 0, 0});
  CHECK(mesh.cell_count() == 4);
  CHECK(mesh.spacing(0) == doctest::Approx(0.25));
  REQUIRE(mesh.boundary_faces().size() == 2);
  CHECK(mesh.boundary_faces()[0].normal[0] == -1.0);
  CHECK(mesh.boundary_faces()[1].normal[0] == 1.0);
  CHECK(mesh.boundary_measure() == doctest::Approx(2.0));
}

TEST_CASE("2-D and 3-D meshes: counting and measures") {
  BoxMesh sq(2, {1.0, 1.0, 0}, {2, 2, 0});
  CHECK(sq.cell_count() == 4);
  CHECK(sq.boundary_faces().size() == 8);
  CHECK(sq.boundary_measure() == doctest::Approx(4.0));

  BoxMesh cube(3, {1.0, 1.0, 1.0}, {32, 32, 32});
  CHECK(cube.cell_count() == 32768);
  CHECK(cube.boundary_faces().size() == 6 * 32 * 32);
  CHECK(cube.boundary_measure() == doctest::Approx(6.0));
}

TEST_CASE("total cell volume equals the product of extents") {
  BoxMesh mesh(3, {2.0, 0.5, 1.5}, {5, 3, 7});
  CHECK(mesh.cell_volume() * static_cast<double>(mesh.cell_count()) ==
        doctest::Approx(mesh.volume()).epsilon(1e-14));
}

TEST_CASE("refinement leaves extents, boundary and volume unchanged") {
  BoxMesh coarse(2, {1.5, 2.5, 0}, {4, 6, 0});
  BoxMesh fine(2, {1.5, 2.5, 0}, {8, 12, 0});
  CHECK(coarse.volume() == doctest::Approx(fine.volume()).epsilon(1e-14));
  CHECK(coarse.boundary_measure() ==
        doctest::Approx(fine.boundary_measure()).epsilon(1e-14));
}

TEST_CASE("cell indexing round-trips") {
  BoxMesh mesh(3, {1.0, 1.0, 1.0}, {3, 4, 5});
  for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
    const auto xyz = mesh.coords(c);
    CHECK(mesh.index(xyz[0], xyz[1], xyz[2]) == c);
  }
}

TEST_CASE("invalid meshes are rejected") {
  CHECK_THROWS_AS(BoxMesh(0, {1, 1, 1}, {2, 2, 2}), std::invalid_argument);
  CHECK_THROWS_AS(BoxMesh(4, {1, 1, 1}, {2, 2, 2}), std::invalid_argument);
  CHECK_THROWS_AS(BoxMesh(2, {1.0, -1.0, 0}, {2, 2, 0}), std::invalid_argument);
  CHECK_THROWS_AS(BoxMesh(1, {1.0, 0, 0}, {1, 0, 0}), std::invalid_argument);
}

TEST_CASE("time grid") {
  TimeGrid tg(0.5, 10);
  CHECK(tg.dt() * tg.steps == doctest::Approx(tg.horizon).epsilon(1e-15));
  CHECK(tg.levels() == 11);
  CHECK(tg.time(0) == 0.0);
  CHECK(tg.time(10) == doctest::Approx(0.5));
  CHECK_THROWS_AS(TimeGrid(0.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid(1.0, 0), std::invalid_argument);
}
