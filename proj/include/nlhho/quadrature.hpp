// Quadrature rules on segments, triangles and polygons.
#pragma once

#include <Eigen/Dense>
#include <vector>

namespace nlhho {

/// Nodes and weights for numerical integration. Points are 2D coordinates in
/// physical space (for face rules they lie on the segment). `order` is the
/// highest total polynomial degree integrated exactly.
struct QuadratureRule {
  std::vector<Eigen::Vector2d> points;
  std::vector<double> weights;
  int order = 0;

  std::size_t size() const { return points.size(); }

  double total_weight() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
  }
};

/// Highest exactness order served by the rule generators below. Requests
/// above this are rejected so callers notice unsupported configurations.
inline constexpr int max_quadrature_order = 30;

/// Gauss-Legendre nodes and weights on [0,1]; exact for degree 2n-1.
void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights);

/// Rule on the segment [a,b], exact for polynomials of the arclength
/// coordinate up to `order`. All weights are positive and sum to |b-a|.
QuadratureRule face_quadrature(const Eigen::Vector2d& a,
                               const Eigen::Vector2d& b, int order);

/// Rule on the triangle (p0,p1,p2) built by conical product of 1D
/// Gauss-Legendre rules. Positive weights, points strictly inside.
QuadratureRule triangle_quadrature(const Eigen::Vector2d& p0,
                                   const Eigen::Vector2d& p1,
                                   const Eigen::Vector2d& p2, int order);

/// Rule on a polygon (CCW vertex list) obtained by fan-triangulation from
/// the area centroid. The polygon must be star-shaped with respect to its
/// centroid, which holds for all meshes generated or accepted here.
QuadratureRule cell_quadrature(const std::vector<Eigen::Vector2d>& polygon,
                               int order);

/// Area centroid of a simple polygon (CCW orientation assumed).
Eigen::Vector2d polygon_centroid(const std::vector<Eigen::Vector2d>& polygon);

/// Signed area of a polygon loop (positive for CCW).
double polygon_signed_area(const std::vector<Eigen::Vector2d>& polygon);

}  // namespace nlhho
