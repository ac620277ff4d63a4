#include "nlhho/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nlhho {

namespace {

void check_order(int order) {
  if (order < 0) throw std::runtime_error("quadrature order must be >= 0");
  if (order > max_quadrature_order)
    throw std::runtime_error("quadrature order " + std::to_string(order) +
                             " exceeds supported maximum " +
                             std::to_string(max_quadrature_order));
}

}  // namespace

void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  if (n < 1) throw std::runtime_error("gauss_legendre: need at least 1 node");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);

  // Roots of P_n on [-1,1] by Newton iteration, then mapped to [0,1].
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    double w = 2.0 / ((1.0 - z * z) * pp * pp);
    nodes[i] = 0.5 * (1.0 - z);
    nodes[n - 1 - i] = 0.5 * (1.0 + z);
    weights[i] = 0.5 * w;
    weights[n - 1 - i] = 0.5 * w;
  }
}

QuadratureRule face_quadrature(const Eigen::Vector2d& a,
                               const Eigen::Vector2d& b, int order) {
  check_order(order);
  const int n = order / 2 + 1;  // 2n-1 >= order
  std::vector<double> x, w;
  gauss_legendre(n, x, w);

  QuadratureRule rule;
  rule.order = order;
  const double len = (b - a).norm();
  rule.points.reserve(n);
  rule.weights.reserve(n);
  for (int i = 0; i < n; ++i) {
    rule.points.push_back(a + x[i] * (b - a));
    rule.weights.push_back(w[i] * len);
  }
  return rule;
}

QuadratureRule triangle_quadrature(const Eigen::Vector2d& p0,
                                   const Eigen::Vector2d& p1,
                                   const Eigen::Vector2d& p2, int order) {
  check_order(order);
  // Collapsed-square (conical product) rule: with u = xi, v = eta*(1-xi) the
  // monomial u^a v^b (a+b <= order) has degree a+b+1 <= order+1 in xi and
  // b <= order in eta.
  const int n_xi = (order + 3) / 2;
  const int n_eta = (order + 2) / 2;
  std::vector<double> xi, wxi, eta, weta;
  gauss_legendre(n_xi, xi, wxi);
  gauss_legendre(n_eta, eta, weta);

  const Eigen::Vector2d e1 = p1 - p0;
  const Eigen::Vector2d e2 = p2 - p0;
  const double jac = std::abs(e1.x() * e2.y() - e1.y() * e2.x());

  QuadratureRule rule;
  rule.order = order;
  rule.points.reserve(static_cast<std::size_t>(n_xi) * n_eta);
  rule.weights.reserve(static_cast<std::size_t>(n_xi) * n_eta);
  for (int i = 0; i < n_xi; ++i) {
    for (int j = 0; j < n_eta; ++j) {
      const double u = xi[i];
      const double v = eta[j] * (1.0 - xi[i]);
      rule.points.push_back(p0 + u * e1 + v * e2);
      rule.weights.push_back(wxi[i] * weta[j] * (1.0 - xi[i]) * jac);
    }
  }
  return rule;
}

double polygon_signed_area(const std::vector<Eigen::Vector2d>& polygon) {
  const std::size_t m = polygon.size();
  double s = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const Eigen::Vector2d& p = polygon[i];
    const Eigen::Vector2d& q = polygon[(i + 1) % m];
    s += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * s;
}

Eigen::Vector2d polygon_centroid(const std::vector<Eigen::Vector2d>& polygon) {
  const std::size_t m = polygon.size();
  const double area = polygon_signed_area(polygon);
  if (std::abs(area) <= 0.0)
    throw std::runtime_error("polygon_centroid: degenerate polygon");
  Eigen::Vector2d c = Eigen::Vector2d::Zero();
  for (std::size_t i = 0; i < m; ++i) {
    const Eigen::Vector2d& p = polygon[i];
    const Eigen::Vector2d& q = polygon[(i + 1) % m];
    const double cross = p.x() * q.y() - q.x() * p.y();
    c += cross * (p + q);
  }
  return c / (6.0 * area);
}

QuadratureRule cell_quadrature(const std::vector<Eigen::Vector2d>& polygon,
                               int order) {
  check_order(order);
  if (polygon.size() < 3)
    throw std::runtime_error("cell_quadrature: polygon needs >= 3 vertices");

  const Eigen::Vector2d c = polygon_centroid(polygon);
  QuadratureRule rule;
  rule.order = order;
  const std::size_t m = polygon.size();
  for (std::size_t i = 0; i < m; ++i) {
    QuadratureRule tri =
        triangle_quadrature(c, polygon[i], polygon[(i + 1) % m], order);
    rule.points.insert(rule.points.end(), tri.points.begin(), tri.points.end());
    rule.weights.insert(rule.weights.end(), tri.weights.begin(),
                        tri.weights.end());
  }
  return rule;
}

}  // namespace nlhho
