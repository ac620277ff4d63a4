#include "nlhho/mesh.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

#include "nlhho/quadrature.hpp"

namespace nlhho {

Mesh build_mesh(std::vector<Eigen::Vector2d> vertices,
                std::vector<std::vector<int>> cells) {
  Mesh mesh;
  mesh.vertices = std::move(vertices);
  mesh.cells = std::move(cells);

  const int nv = mesh.n_vertices();
  const int nc = mesh.n_cells();

  for (int K = 0; K < nc; ++K) {
    auto& loop = mesh.cells[K];
    if (loop.size() < 3)
      throw std::runtime_error("cell " + std::to_string(K) +
                               " has fewer than 3 vertices");
    std::set<int> seen;
    for (int v : loop) {
      if (v < 0 || v >= nv)
        throw std::runtime_error("cell " + std::to_string(K) +
                                 " references invalid vertex " +
                                 std::to_string(v));
      if (!seen.insert(v).second)
        throw std::runtime_error("repeated vertex index in cell " +
                                 std::to_string(K));
    }
    std::vector<Eigen::Vector2d> poly;
    poly.reserve(loop.size());
    for (int v : loop) poly.push_back(mesh.vertices[v]);
    double area = polygon_signed_area(poly);
    if (area < 0.0) {
      std::reverse(loop.begin(), loop.end());
      area = -area;
    }
    if (!(area > 0.0))
      throw std::runtime_error("cell " + std::to_string(K) +
                               " has zero or undefined area");
    mesh.cell_area.push_back(area);
  }

  // Face table keyed by the sorted vertex pair.
  std::map<std::array<int, 2>, int> face_of;
  mesh.cell_faces.resize(nc);
  mesh.cell_face_normals.resize(nc);
  for (int K = 0; K < nc; ++K) {
    const auto& loop = mesh.cells[K];
    const int m = static_cast<int>(loop.size());
    for (int e = 0; e < m; ++e) {
      const int a = loop[e];
      const int b = loop[(e + 1) % m];
      std::array<int, 2> key = {std::min(a, b), std::max(a, b)};
      auto it = face_of.find(key);
      int f;
      if (it == face_of.end()) {
        f = mesh.n_faces();
        face_of.emplace(key, f);
        mesh.face_vertices.push_back(key);
        mesh.face_cells.push_back({K, -1});
      } else {
        f = it->second;
        if (mesh.face_cells[f][1] >= 0)
          throw std::runtime_error("face between vertices " +
                                   std::to_string(key[0]) + " and " +
                                   std::to_string(key[1]) +
                                   " is shared by more than two cells");
        mesh.face_cells[f][1] = K;
      }
      mesh.cell_faces[K].push_back(f);

      const Eigen::Vector2d d = mesh.vertices[b] - mesh.vertices[a];
      const double len = d.norm();
      if (!(len > 0.0))
        throw std::runtime_error("zero-length edge in cell " +
                                 std::to_string(K));
      // Loop is CCW, so rotating the edge direction by -90 degrees points
      // out of the cell.
      mesh.cell_face_normals[K].push_back(Eigen::Vector2d(d.y(), -d.x()) /
                                          len);
    }
  }

  for (int f = 0; f < mesh.n_faces(); ++f) {
    const auto ends = mesh.face_endpoints(f);
    mesh.face_length.push_back((ends[1] - ends[0]).norm());
    mesh.face_midpoint.push_back(0.5 * (ends[0] + ends[1]));
  }

  for (int K = 0; K < nc; ++K) {
    const auto poly = mesh.cell_polygon(K);
    mesh.cell_centroid.push_back(polygon_centroid(poly));
    double h = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i)
      for (std::size_t j = i + 1; j < poly.size(); ++j)
        h = std::max(h, (poly[i] - poly[j]).norm());
    mesh.cell_diameter.push_back(h);
    mesh.h_max = std::max(mesh.h_max, h);
  }

  return mesh;
}

Mesh single_cell_mesh(const std::vector<Eigen::Vector2d>& polygon) {
  std::vector<int> loop(polygon.size());
  for (std::size_t i = 0; i < polygon.size(); ++i)
    loop[i] = static_cast<int>(i);
  return build_mesh(polygon, {loop});
}

}  // namespace nlhho
