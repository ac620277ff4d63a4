// Orthonormal polynomial bases on cells and faces, and L2 projections.
#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <vector>

#include "nlhho/quadrature.hpp"

namespace nlhho {

constexpr int cell_space_dim(int deg) { return (deg + 1) * (deg + 2) / 2; }
constexpr int face_space_dim(int deg) { return deg + 1; }

/// Basis of P^deg(K): scaled monomials ((x-xK)/hK)^a ((y-yK)/hK)^b in graded
/// order, L2(K)-orthonormalized by Cholesky of the Gram matrix (with one
/// refinement pass). Graded order makes the leading cell_space_dim(d)
/// functions an orthonormal basis of P^d(K) for every d <= deg.
class CellBasis {
 public:
  CellBasis(const std::vector<Eigen::Vector2d>& polygon, int deg,
            const QuadratureRule& quad);

  int degree() const { return m_deg; }
  int dimension() const { return cell_space_dim(m_deg); }
  const Eigen::Vector2d& center() const { return m_center; }
  double scale() const { return m_scale; }

  /// Values of all basis functions at x.
  Eigen::VectorXd values(const Eigen::Vector2d& x) const;
  /// Gradients of all basis functions at x (dimension x 2).
  Eigen::MatrixXd gradients(const Eigen::Vector2d& x) const;

 private:
  int m_deg;
  Eigen::Vector2d m_center;
  double m_scale;
  std::vector<std::array<int, 2>> m_exp;  // monomial exponents, graded
  Eigen::MatrixXd m_coeff;  // basis_j = sum_i m_coeff(i,j) * monomial_i
};

/// Basis of P^deg(sigma): monomials in the normalized arclength coordinate
/// s in [-1,1], L2(sigma)-orthonormalized as above.
class FaceBasis {
 public:
  FaceBasis(const Eigen::Vector2d& a, const Eigen::Vector2d& b, int deg);

  int degree() const { return m_deg; }
  int dimension() const { return face_space_dim(m_deg); }

  Eigen::VectorXd values(const Eigen::Vector2d& x) const;

 private:
  int m_deg;
  Eigen::Vector2d m_mid;
  Eigen::Vector2d m_tangent;  // scaled so s(x) = tangent . (x - mid)
  Eigen::MatrixXd m_coeff;
};

/// Coefficients of the L2(K)-orthogonal projection of f onto the span of
/// `basis`, using the given quadrature rule.
Eigen::VectorXd l2_project_cell(
    const std::function<double(const Eigen::Vector2d&)>& f,
    const CellBasis& basis, const QuadratureRule& quad);

Eigen::VectorXd l2_project_face(
    const std::function<double(const Eigen::Vector2d&)>& f,
    const FaceBasis& basis, const QuadratureRule& quad);

}  // namespace nlhho
