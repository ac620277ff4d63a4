// Polytopal mesh container: vertices, CCW cell loops, derived face topology
// and geometric quantities.
#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

namespace nlhho {

struct Mesh {
  std::vector<Eigen::Vector2d> vertices;
  std::vector<std::vector<int>> cells;  // CCW vertex loops

  // Derived connectivity. A face is an unordered vertex pair; face_cells
  // holds the one or two incident cells (-1 marks "no neighbour").
  std::vector<std::array<int, 2>> face_vertices;
  std::vector<std::array<int, 2>> face_cells;
  std::vector<std::vector<int>> cell_faces;  // aligned with the vertex loop
  std::vector<std::vector<Eigen::Vector2d>> cell_face_normals;  // outward unit

  // Derived geometry.
  std::vector<double> cell_area;
  std::vector<double> cell_diameter;
  std::vector<Eigen::Vector2d> cell_centroid;
  std::vector<double> face_length;
  std::vector<Eigen::Vector2d> face_midpoint;
  double h_max = 0.0;  // largest cell diameter

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_cells() const { return static_cast<int>(cells.size()); }
  int n_faces() const { return static_cast<int>(face_vertices.size()); }

  bool face_is_boundary(int f) const { return face_cells[f][1] < 0; }

  std::vector<Eigen::Vector2d> cell_polygon(int K) const {
    std::vector<Eigen::Vector2d> poly;
    poly.reserve(cells[K].size());
    for (int v : cells[K]) poly.push_back(vertices[v]);
    return poly;
  }

  std::array<Eigen::Vector2d, 2> face_endpoints(int f) const {
    return {vertices[face_vertices[f][0]], vertices[face_vertices[f][1]]};
  }

  double total_area() const {
    double s = 0.0;
    for (double a : cell_area) s += a;
    return s;
  }
};

/// Builds the full mesh structure from raw vertices and cell loops.
/// Cell loops given clockwise are reversed; degenerate cells, repeated
/// vertex indices within a loop and faces shared by more than two cells
/// are rejected with a descriptive error.
Mesh build_mesh(std::vector<Eigen::Vector2d> vertices,
                std::vector<std::vector<int>> cells);

/// Convenience: mesh made of one polygonal cell.
Mesh single_cell_mesh(const std::vector<Eigen::Vector2d>& polygon);

}  // namespace nlhho
