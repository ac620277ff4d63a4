#include "nlhho/mesh_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace nlhho {

namespace {

// Reads the next content line (comments stripped, blanks skipped). Returns
// false at end of stream; `lineno` tracks the physical line for errors.
bool next_line(std::istream& in, std::string& line, int& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto pos = line.find_first_not_of(" \t\r\n");
    if (pos == std::string::npos) continue;
    return true;
  }
  return false;
}

[[noreturn]] void fail(int lineno, const std::string& what) {
  throw std::runtime_error("polymesh parse error at line " +
                           std::to_string(lineno) + ": " + what);
}

}  // namespace

Mesh read_mesh(std::istream& in) {
  std::string line;
  int lineno = 0;

  if (!next_line(in, line, lineno)) fail(lineno, "missing header");
  {
    std::istringstream ls(line);
    std::string tag;
    int version = 0;
    if (!(ls >> tag >> version) || tag != "polymesh" || version != 1)
      fail(lineno, "expected 'polymesh 1' header");
  }

  if (!next_line(in, line, lineno)) fail(lineno, "missing vertex count");
  long nv = -1;
  {
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag >> nv) || tag != "vertices" || nv < 0)
      fail(lineno, "expected 'vertices <count>'");
  }

  std::vector<Eigen::Vector2d> vertices;
  vertices.reserve(nv);
  for (long i = 0; i < nv; ++i) {
    if (!next_line(in, line, lineno))
      fail(lineno, "unexpected end of file in vertex list");
    std::istringstream ls(line);
    double x, y;
    if (!(ls >> x >> y)) fail(lineno, "expected two vertex coordinates");
    vertices.emplace_back(x, y);
  }

  if (!next_line(in, line, lineno)) fail(lineno, "missing cell count");
  long ncells = -1;
  {
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag >> ncells) || tag != "cells" || ncells < 0)
      fail(lineno, "expected 'cells <count>'");
  }

  std::vector<std::vector<int>> cells;
  cells.reserve(ncells);
  for (long K = 0; K < ncells; ++K) {
    if (!next_line(in, line, lineno))
      fail(lineno, "unexpected end of file in cell list");
    std::istringstream ls(line);
    int m = 0;
    if (!(ls >> m) || m < 3) fail(lineno, "cell must list >= 3 vertices");
    std::vector<int> loop(m);
    for (int e = 0; e < m; ++e) {
      if (!(ls >> loop[e])) fail(lineno, "truncated cell vertex list");
      if (loop[e] < 0 || loop[e] >= nv)
        fail(lineno, "vertex index " + std::to_string(loop[e]) +
                         " out of range");
    }
    cells.push_back(std::move(loop));
  }

  try {
    return build_mesh(std::move(vertices), std::move(cells));
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(std::string("polymesh: invalid mesh: ") +
                             e.what());
  }
}

Mesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mesh file: " + path);
  return read_mesh(in);
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
  out << "polymesh 1\n";
  out << "vertices " << mesh.n_vertices() << "\n";
  out << std::setprecision(17);
  for (const auto& v : mesh.vertices) out << v.x() << " " << v.y() << "\n";
  out << "cells " << mesh.n_cells() << "\n";
  for (const auto& loop : mesh.cells) {
    out << loop.size();
    for (int v : loop) out << " " << v;
    out << "\n";
  }
}

void write_mesh_file(const std::string& path, const Mesh& mesh) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  write_mesh(out, mesh);
  if (!out) throw std::runtime_error("failed writing mesh file: " + path);
}

}  // namespace nlhho
