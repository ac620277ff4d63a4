// Text serialization of meshes.
//
// Format ("polymesh", version 1):
//   polymesh 1
//   vertices <N>
//   <x> <y>            (N lines)
//   cells <M>
//   <m> <i1> ... <im>  (M lines, zero-based CCW vertex loops)
// Lines may carry '#' comments; blank lines are ignored.
#pragma once

#include <iosfwd>
#include <string>

#include "nlhho/mesh.hpp"

namespace nlhho {

Mesh read_mesh(std::istream& in);
Mesh read_mesh_file(const std::string& path);

void write_mesh(std::ostream& out, const Mesh& mesh);
void write_mesh_file(const std::string& path, const Mesh& mesh);

}  // namespace nlhho
