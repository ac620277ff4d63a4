// Structured mesh generators on the unit square.
#pragma once

#include "nlhho/mesh.hpp"

namespace nlhho {

/// Uniform triangulation: n x n squares each split along the same diagonal.
/// n >= 1; 2*n^2 cells.
Mesh gen_triangular(int n);

/// Distorted quadrilateral grid with layered zig-zag interfaces. Columns are
/// straight vertical lines x = i/n; the vertex (i,j) sits at height
///   y = j/n + d * z(i/n) * w(j/n),
/// with z the period-1/2 triangular wave (z(0)=0, z(1/4)=1) and
/// w(t) = 2*min(t, 1-t). Cells are convex for 0 <= d < 0.5; the generator
/// rejects parameters that produce a non-convex cell. n must be even.
Mesh gen_kershaw(int n, double d);

/// Hexagonal-dominant mesh: pointy-top honeycomb with nc columns, clipped to
/// the unit square (boundary cells become quadrilaterals/pentagons and half
/// hexagons). Roughly 2*nc^2/sqrt(3) cells.
Mesh gen_hexdominant(int nc);

}  // namespace nlhho
