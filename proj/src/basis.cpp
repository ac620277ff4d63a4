#include "nlhho/basis.hpp"

#include <cmath>
#include <stdexcept>

namespace nlhho {

namespace {

// Orthonormalizes a monomial set given its Gram matrix: returns C with
// C^T G C = I and C upper triangular (so graded spans are preserved).
// A second pass tightens the factorization against roundoff.
Eigen::MatrixXd orthonormalize(Eigen::MatrixXd gram) {
  const int n = static_cast<int>(gram.rows());
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("basis orthonormalization failed (Gram matrix "
                             "not positive definite)");
  Eigen::MatrixXd coeff = llt.matrixU()
                              .solve(Eigen::MatrixXd::Identity(n, n))
                              .triangularView<Eigen::Upper>();

  Eigen::MatrixXd gram2 = coeff.transpose() * gram * coeff;
  Eigen::LLT<Eigen::MatrixXd> llt2(gram2);
  if (llt2.info() == Eigen::Success)
    coeff = coeff * llt2.matrixU().solve(Eigen::MatrixXd::Identity(n, n));
  return coeff;
}

}  // namespace

CellBasis::CellBasis(const std::vector<Eigen::Vector2d>& polygon, int deg,
                     const QuadratureRule& quad)
    : m_deg(deg) {
  if (deg < 0) throw std::runtime_error("CellBasis: degree must be >= 0");
  m_center = polygon_centroid(polygon);
  m_scale = 0.0;
  for (std::size_t i = 0; i < polygon.size(); ++i)
    for (std::size_t j = i + 1; j < polygon.size(); ++j)
      m_scale = std::max(m_scale, (polygon[i] - polygon[j]).norm());
  if (!(m_scale > 0.0))
    throw std::runtime_error("CellBasis: degenerate polygon");

  for (int d = 0; d <= deg; ++d)
    for (int a = d; a >= 0; --a) m_exp.push_back({a, d - a});

  const int n = dimension();
  Eigen::MatrixXd vals(n, static_cast<int>(quad.size()));
  for (std::size_t q = 0; q < quad.size(); ++q) {
    const Eigen::Vector2d s = (quad.points[q] - m_center) / m_scale;
    for (int i = 0; i < n; ++i)
      vals(i, static_cast<int>(q)) =
          std::pow(s.x(), m_exp[i][0]) * std::pow(s.y(), m_exp[i][1]);
  }
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t q = 0; q < quad.size(); ++q)
    gram += quad.weights[q] * vals.col(static_cast<int>(q)) *
            vals.col(static_cast<int>(q)).transpose();
  m_coeff = orthonormalize(std::move(gram));
}

Eigen::VectorXd CellBasis::values(const Eigen::Vector2d& x) const {
  const int n = dimension();
  const Eigen::Vector2d s = (x - m_center) / m_scale;
  Eigen::VectorXd mono(n);
  for (int i = 0; i < n; ++i)
    mono(i) = std::pow(s.x(), m_exp[i][0]) * std::pow(s.y(), m_exp[i][1]);
  return m_coeff.transpose() * mono;
}

Eigen::MatrixXd CellBasis::gradients(const Eigen::Vector2d& x) const {
  const int n = dimension();
  const Eigen::Vector2d s = (x - m_center) / m_scale;
  Eigen::MatrixXd dmono(n, 2);
  for (int i = 0; i < n; ++i) {
    const int a = m_exp[i][0], b = m_exp[i][1];
    dmono(i, 0) = a == 0 ? 0.0
                         : a * std::pow(s.x(), a - 1) * std::pow(s.y(), b) /
                               m_scale;
    dmono(i, 1) = b == 0 ? 0.0
                         : b * std::pow(s.x(), a) * std::pow(s.y(), b - 1) /
                               m_scale;
  }
  return m_coeff.transpose() * dmono;
}

FaceBasis::FaceBasis(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                     int deg)
    : m_deg(deg) {
  if (deg < 0) throw std::runtime_error("FaceBasis: degree must be >= 0");
  const double len = (b - a).norm();
  if (!(len > 0.0)) throw std::runtime_error("FaceBasis: zero-length face");
  m_mid = 0.5 * (a + b);
  m_tangent = 2.0 * (b - a) / (len * len);  // s in [-1,1] along the face

  // Gram of s^p on the face: integral of s^{p+q} ds = |sigma|/ (p+q+1) for
  // even p+q, 0 otherwise.
  const int n = dimension();
  Eigen::MatrixXd gram(n, n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      gram(p, q) = (p + q) % 2 == 0 ? len / (p + q + 1.0) : 0.0;
  m_coeff = orthonormalize(std::move(gram));
}

Eigen::VectorXd FaceBasis::values(const Eigen::Vector2d& x) const {
  const double s = m_tangent.dot(x - m_mid);
  const int n = dimension();
  Eigen::VectorXd mono(n);
  double p = 1.0;
  for (int i = 0; i < n; ++i, p *= s) mono(i) = p;
  return m_coeff.transpose() * mono;
}

Eigen::VectorXd l2_project_cell(
    const std::function<double(const Eigen::Vector2d&)>& f,
    const CellBasis& basis, const QuadratureRule& quad) {
  const int n = basis.dimension();
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (std::size_t q = 0; q < quad.size(); ++q) {
    const Eigen::VectorXd phi = basis.values(quad.points[q]);
    gram += quad.weights[q] * phi * phi.transpose();
    rhs += quad.weights[q] * f(quad.points[q]) * phi;
  }
  return gram.ldlt().solve(rhs);
}

Eigen::VectorXd l2_project_face(
    const std::function<double(const Eigen::Vector2d&)>& f,
    const FaceBasis& basis, const QuadratureRule& quad) {
  const int n = basis.dimension();
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (std::size_t q = 0; q < quad.size(); ++q) {
    const Eigen::VectorXd phi = basis.values(quad.points[q]);
    gram += quad.weights[q] * phi * phi.transpose();
    rhs += quad.weights[q] * f(quad.points[q]) * phi;
  }
  return gram.ldlt().solve(rhs);
}

}  // namespace nlhho
