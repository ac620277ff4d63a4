// Mesh construction, generators, invariants, and text-format round trips.
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "nlhho/mesh.hpp"
#include "nlhho/mesh_gen.hpp"
#include "nlhho/mesh_io.hpp"
#include "oracles.hpp"

using namespace nlhho;

namespace {

// Shared geometric invariants every valid mesh must satisfy.
void check_invariants(const Mesh& mesh) {
  double total = 0.0;
  for (std::size_t K = 0; K < mesh.n_cells(); ++K) {
    REQUIRE(mesh.cell_area[K] > 0.0);
    total += mesh.cell_area[K];

    // Closed polygon: sum of length-weighted outward normals vanishes.
    Eigen::Vector2d closure = Eigen::Vector2d::Zero();
    for (std::size_t e = 0; e < mesh.cell_faces[K].size(); ++e) {
      const std::size_t f = mesh.cell_faces[K][e];
      closure += mesh.face_length[f] * mesh.cell_face_normals[K][e];
      // Outward: the normal points away from the cell centroid.
      const Eigen::Vector2d to_face =
          mesh.face_midpoint[f] - mesh.cell_centroid[K];
      CHECK(to_face.dot(mesh.cell_face_normals[K][e]) > 0.0);
      // Face size never exceeds the cell diameter.
      CHECK(mesh.face_length[f] <= mesh.cell_diameter[K] + 1e-14);
    }
    CHECK(closure.norm() < 1e-13);
    CHECK(mesh.cell_diameter[K] <= mesh.h_max + 1e-15);
  }
  CHECK(total == doctest::Approx(mesh.total_area()).epsilon(1e-13));

  // Interior faces see two cells, boundary faces one.
  for (std::size_t f = 0; f < mesh.n_faces(); ++f) {
    CHECK(mesh.face_cells[f][0] >= 0);
    if (mesh.face_is_boundary(f)) CHECK(mesh.face_cells[f][1] == -1);
  }
}

}  // namespace

TEST_CASE("triangular generator: counts, measures, invariants") {
  const Mesh m1 = gen_triangular(1);
  CHECK(m1.n_cells() == 2);
  CHECK(m1.n_vertices() == 4);
  CHECK(m1.n_faces() == 5);
  CHECK(m1.h_max == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

  for (int n : {2, 4, 8}) {
    const Mesh m = gen_triangular(n);
    CHECK(m.n_cells() == static_cast<std::size_t>(2 * n * n));
    CHECK(m.total_area() == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(m.h_max == doctest::Approx(std::sqrt(2.0) / n).epsilon(1e-13));
    check_invariants(m);
  }
}

TEST_CASE("distorted quadrilateral generator") {
  const Mesh undistorted = gen_kershaw(4, 0.0);
  CHECK(undistorted.n_cells() == 16);
  CHECK(undistorted.h_max == doctest::Approx(std::sqrt(2.0) / 4).epsilon(1e-13));

  for (double d : {0.1, 0.3, 0.45}) {
    const Mesh m = gen_kershaw(8, d);
    CHECK(m.n_cells() == 64);
    CHECK(m.total_area() == doctest::Approx(1.0).epsilon(1e-12));
    check_invariants(m);
  }

  CHECK_THROWS_AS(gen_kershaw(4, 0.6), std::runtime_error);
  CHECK_THROWS_AS(gen_kershaw(3, 0.2), std::runtime_error);
  CHECK_THROWS_AS(gen_kershaw(0, 0.2), std::runtime_error);
}

TEST_CASE("hexagon-dominant generator covers the unit square") {
  for (int nc : {2, 4, 6, 10}) {
    const Mesh m = gen_hexdominant(nc);
    CHECK(m.total_area() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.n_cells() > static_cast<std::size_t>(nc * nc));
    check_invariants(m);
    // Interior of the mesh contains genuine hexagons.
    std::size_t hexes = 0;
    for (std::size_t K = 0; K < m.n_cells(); ++K)
      if (m.cells[K].size() == 6) ++hexes;
    CHECK(hexes > 0);
  }
}

TEST_CASE("mesh builder rejects malformed input") {
  // Repeated vertex within one cell loop.
  std::vector<Eigen::Vector2d> verts = {
      {0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
  CHECK_THROWS_WITH_AS(build_mesh(verts, {{0, 1, 1, 2}}),
                       doctest::Contains("repeated vertex"),
                       std::runtime_error);
  // Out-of-range vertex index.
  CHECK_THROWS_AS(build_mesh(verts, {{0, 1, 7}}), std::runtime_error);
  // Degenerate (zero-area) cell.
  std::vector<Eigen::Vector2d> line = {{0.0, 0.0}, {0.5, 0.0}, {1.0, 0.0}};
  CHECK_THROWS_AS(build_mesh(line, {{0, 1, 2}}), std::runtime_error);
  // An edge shared by three cells.
  std::vector<Eigen::Vector2d> fan = {
      {0.0, 0.0}, {1.0, 0.0}, {0.5, 1.0}, {0.5, -1.0}, {2.0, 0.5}};
  CHECK_THROWS_AS(build_mesh(fan, {{0, 1, 2}, {1, 0, 3}, {0, 1, 4}}),
                  std::runtime_error);
}

TEST_CASE("clockwise cell loops are reoriented") {
  std::vector<Eigen::Vector2d> verts = {
      {0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
  const Mesh m = build_mesh(verts, {{0, 3, 2, 1}});
  CHECK(m.cell_area[0] == doctest::Approx(1.0).epsilon(1e-15));
  check_invariants(m);
}

TEST_CASE("text format round trip preserves the mesh") {
  const Mesh m = gen_hexdominant(3);
  std::ostringstream out;
  write_mesh(out, m);
  std::istringstream in(out.str());
  const Mesh r = read_mesh(in);
  REQUIRE(r.n_cells() == m.n_cells());
  REQUIRE(r.n_faces() == m.n_faces());
  for (std::size_t K = 0; K < m.n_cells(); ++K) {
    CHECK(std::abs(r.cell_area[K] - m.cell_area[K]) < 1e-14);
    CHECK(std::abs(r.cell_diameter[K] - m.cell_diameter[K]) < 1e-14);
    CHECK((r.cell_centroid[K] - m.cell_centroid[K]).norm() < 1e-14);
  }
  for (std::size_t f = 0; f < m.n_faces(); ++f)
    CHECK(std::abs(r.face_length[f] - m.face_length[f]) < 1e-14);
}

TEST_CASE("single-cell unit square parses from text") {
  const std::string text =
      "# test mesh\n"
      "polymesh 1\n"
      "vertices 4\n"
      "0 0\n"
      "1 0\n"
      "1 1\n"
      "0 1\n"
      "cells 1\n"
      "4 0 1 2 3\n";
  std::istringstream in(text);
  const Mesh m = read_mesh(in);
  CHECK(m.n_cells() == 1);
  CHECK(m.n_faces() == 4);
  CHECK(m.cell_area[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(m.cell_diameter[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("parser reports malformed files with line numbers") {
  auto expect_throw = [](const std::string& text) {
    std::istringstream in(text);
    CHECK_THROWS_WITH_AS(read_mesh(in), doctest::Contains("line"),
                         std::runtime_error);
  };
  expect_throw("");  // missing header
  expect_throw("polymesh 2\nvertices 1\n0 0\ncells 1\n3 0 0 0\n");  // version
  expect_throw(
      "polymesh 1\nvertices 4\n0 0\n1 0\n1 1\n");  // truncated vertices
  expect_throw(
      "polymesh 1\nvertices 2\n0 0\n1 0\ncells 1\n3 0 1 5\n");  // bad index
  expect_throw("polymesh 1\nx y\n");  // malformed vertex-count line
}

TEST_CASE("shipped sample meshes load and tile the unit square") {
  const Mesh square = read_mesh_file(std::string(NLHHO_DATA_DIR) +
                                     "/unit_square.poly.txt");
  CHECK(square.n_cells() == 1);
  CHECK(square.total_area() == doctest::Approx(1.0).epsilon(1e-14));

  const Mesh hex = read_mesh_file(std::string(NLHHO_DATA_DIR) +
                                  "/hexdominant_8.poly.txt");
  CHECK(hex.n_cells() > 64);
  double total = 0.0;
  for (std::size_t K = 0; K < hex.n_cells(); ++K) {
    std::vector<Eigen::Vector2d> poly;
    for (auto v : hex.cells[K]) poly.push_back(hex.vertices[v]);
    total += oracle::polygon_moment(poly, 0, 0);
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
}
