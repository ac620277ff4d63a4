#include "nlhho/mesh_gen.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "nlhho/quadrature.hpp"

namespace nlhho {

Mesh gen_triangular(int n) {
  if (n < 1) throw std::runtime_error("gen_triangular: n must be >= 1");
  std::vector<Eigen::Vector2d> vertices;
  vertices.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      vertices.emplace_back(double(i) / n, double(j) / n);

  auto vid = [n](int i, int j) { return j * (n + 1) + i; };

  std::vector<std::vector<int>> cells;
  cells.reserve(2u * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int a = vid(i, j), b = vid(i + 1, j);
      const int c = vid(i + 1, j + 1), d = vid(i, j + 1);
      cells.push_back({a, b, c});
      cells.push_back({a, c, d});
    }
  }
  return build_mesh(std::move(vertices), std::move(cells));
}

namespace {

// Period-1/2 triangular wave with z(0)=0, z(1/4)=1, z(1/2)=0.
double zigzag(double t) {
  double s = 2.0 * t;
  s -= std::floor(s);
  return 1.0 - std::abs(2.0 * s - 1.0);
}

}  // namespace

Mesh gen_kershaw(int n, double d) {
  if (n < 2 || n % 2 != 0)
    throw std::runtime_error("gen_kershaw: n must be even and >= 2");
  if (!(d >= 0.0))
    throw std::runtime_error("gen_kershaw: distortion must be >= 0");

  std::vector<Eigen::Vector2d> vertices;
  vertices.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      const double x = double(i) / n;
      const double t = double(j) / n;
      const double y = t + d * zigzag(x) * 2.0 * std::min(t, 1.0 - t);
      vertices.emplace_back(x, y);
    }
  }

  auto vid = [n](int i, int j) { return j * (n + 1) + i; };

  std::vector<std::vector<int>> cells;
  cells.reserve(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      cells.push_back(
          {vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)});

  Mesh mesh = build_mesh(std::move(vertices), std::move(cells));

  for (int K = 0; K < mesh.n_cells(); ++K) {
    const auto poly = mesh.cell_polygon(K);
    const int m = static_cast<int>(poly.size());
    for (int e = 0; e < m; ++e) {
      const Eigen::Vector2d u = poly[(e + 1) % m] - poly[e];
      const Eigen::Vector2d v = poly[(e + 2) % m] - poly[(e + 1) % m];
      if (u.x() * v.y() - u.y() * v.x() <= 0.0)
        throw std::runtime_error(
            "gen_kershaw: non-convex or inverted cell " + std::to_string(K) +
            " (distortion too large; need d < 0.5)");
    }
  }
  return mesh;
}

Mesh gen_hexdominant(int nc) {
  if (nc < 2) throw std::runtime_error("gen_hexdominant: nc must be >= 2");

  // Pointy-top honeycomb. Hexagon width w = 1/nc, vertical radius r chosen
  // so an integer number of rows spans [0,1]; all vertex coordinates land on
  // the half-step lattice (multiples of w/2 and r/2), which makes welding
  // coincident vertices exact.
  const int nr = std::max(2, static_cast<int>(std::lround(2.0 * nc / std::sqrt(3.0))));

  std::map<std::array<int, 2>, int> vertex_of;
  std::vector<Eigen::Vector2d> vertices;
  std::vector<std::vector<int>> cells;

  auto vertex_id = [&](int ix, int iy) {
    ix = std::clamp(ix, 0, 2 * nc);
    iy = std::clamp(iy, 0, 3 * nr);
    std::array<int, 2> key = {ix, iy};
    auto it = vertex_of.find(key);
    if (it != vertex_of.end()) return it->second;
    const int id = static_cast<int>(vertices.size());
    vertex_of.emplace(key, id);
    vertices.emplace_back(ix / (2.0 * nc), iy / (3.0 * nr));
    return id;
  };

  for (int row = 0; row <= nr; ++row) {
    const int iy = 3 * row;  // centre height row*1.5*r in r/2 units
    const bool offset = (row % 2 == 0);
    const int count = offset ? nc : nc + 1;
    for (int j = 0; j < count; ++j) {
      const int ix = offset ? 2 * j + 1 : 2 * j;  // centre in w/2 units
      // CCW starting at the top vertex.
      const int hex[6][2] = {{ix, iy + 2},     {ix - 1, iy + 1},
                             {ix - 1, iy - 1}, {ix, iy - 2},
                             {ix + 1, iy - 1}, {ix + 1, iy + 1}};
      std::vector<int> loop;
      for (const auto& p : hex) {
        const int v = vertex_id(p[0], p[1]);
        if (loop.empty() || (v != loop.back() && v != loop.front()))
          loop.push_back(v);
      }
      if (loop.size() >= 3) {
        std::vector<Eigen::Vector2d> poly;
        for (int v : loop) poly.push_back(vertices[v]);
        if (std::abs(polygon_signed_area(poly)) > 1e-14) cells.push_back(loop);
      }
    }
  }

  return build_mesh(std::move(vertices), std::move(cells));
}

}  // namespace nlhho
