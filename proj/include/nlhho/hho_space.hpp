// Hybrid discrete space: cell unknowns of degree k+1, face unknowns of
// degree k, with cached bases, quadrature rules and basis tabulations.
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <vector>

#include "nlhho/basis.hpp"
#include "nlhho/mesh.hpp"

namespace nlhho {

using ScalarField = std::function<double(const Eigen::Vector2d&)>;

class HhoSpace {
 public:
  /// quad_order < 0 selects the default 2k+5.
  HhoSpace(const Mesh& mesh, int k, int quad_order = -1);

  const Mesh& mesh() const { return *m_mesh; }
  int k() const { return m_k; }
  int cell_degree() const { return m_k + 1; }
  int quad_order() const { return m_quad_order; }

  int cell_block_dim() const { return cell_space_dim(m_k + 1); }
  int face_block_dim() const { return face_space_dim(m_k); }
  int n_cell_dofs() const { return m_mesh->n_cells() * cell_block_dim(); }
  int n_face_dofs() const { return m_mesh->n_faces() * face_block_dim(); }
  int n_dofs() const { return n_cell_dofs() + n_face_dofs(); }

  int cell_offset(int K) const { return K * cell_block_dim(); }
  int face_offset(int f) const {
    return n_cell_dofs() + f * face_block_dim();
  }

  /// Local dof count of cell K: cell block plus one block per face.
  int local_dim(int K) const {
    return cell_block_dim() +
           face_block_dim() * static_cast<int>(m_mesh->cell_faces[K].size());
  }

  /// Global indices of cell K's local dofs (cell block first, then face
  /// blocks in cell_faces order).
  std::vector<int> local_to_global(int K) const;

  const CellBasis& cell_basis(int K) const { return m_cell_basis[K]; }
  const FaceBasis& face_basis(int f) const { return m_face_basis[f]; }
  const QuadratureRule& cell_rule(int K) const { return m_cell_rule[K]; }
  const QuadratureRule& face_rule(int f) const { return m_face_rule[f]; }

  // Tabulations at quadrature points.
  const Eigen::MatrixXd& cell_values(int K) const { return m_cell_vals[K]; }
  const std::vector<Eigen::MatrixXd>& cell_gradients(int K) const {
    return m_cell_grads[K];
  }  // [q] is dim x 2
  const Eigen::MatrixXd& face_values(int f) const { return m_face_vals[f]; }
  /// Trace of cell K's basis at the quadrature points of its e-th face.
  const Eigen::MatrixXd& trace_values(int K, int e) const {
    return m_trace_vals[K][e];
  }

 private:
  const Mesh* m_mesh;
  int m_k;
  int m_quad_order;
  std::vector<CellBasis> m_cell_basis;
  std::vector<FaceBasis> m_face_basis;
  std::vector<QuadratureRule> m_cell_rule;
  std::vector<QuadratureRule> m_face_rule;
  std::vector<Eigen::MatrixXd> m_cell_vals;   // [K]: dim x nq
  std::vector<std::vector<Eigen::MatrixXd>> m_cell_grads;  // [K][q]: dim x 2
  std::vector<Eigen::MatrixXd> m_face_vals;   // [f]: dim x nq
  std::vector<std::vector<Eigen::MatrixXd>> m_trace_vals;  // [K][e]: dim x nq
};

/// Coefficient vector over the hybrid space: all cell blocks first, then all
/// face blocks.
class DiscreteVector {
 public:
  explicit DiscreteVector(const HhoSpace& space)
      : coeffs(Eigen::VectorXd::Zero(space.n_dofs())), m_space(&space) {}
  DiscreteVector(const HhoSpace& space, Eigen::VectorXd c)
      : coeffs(std::move(c)), m_space(&space) {}

  const HhoSpace& space() const { return *m_space; }

  Eigen::VectorBlock<Eigen::VectorXd> cell_block(int K) {
    return coeffs.segment(m_space->cell_offset(K), m_space->cell_block_dim());
  }
  Eigen::VectorXd cell_block(int K) const {
    return coeffs.segment(m_space->cell_offset(K), m_space->cell_block_dim());
  }
  Eigen::VectorBlock<Eigen::VectorXd> face_block(int f) {
    return coeffs.segment(m_space->face_offset(f), m_space->face_block_dim());
  }
  Eigen::VectorXd face_block(int f) const {
    return coeffs.segment(m_space->face_offset(f), m_space->face_block_dim());
  }

  /// Local restriction to cell K (cell block, then face blocks).
  Eigen::VectorXd local(int K) const;

  /// Pointwise evaluation of the cell polynomial on K.
  double eval_cell(int K, const Eigen::Vector2d& x) const {
    return m_space->cell_basis(K).values(x).dot(cell_block(K));
  }
  /// Pointwise evaluation of the face polynomial on sigma.
  double eval_face(int f, const Eigen::Vector2d& x) const {
    return m_space->face_basis(f).values(x).dot(face_block(f));
  }

  Eigen::VectorXd coeffs;

 private:
  const HhoSpace* m_space;
};

/// Componentwise interpolate: L2 projections of f onto each cell space
/// (degree k+1) and each face space (degree k).
DiscreteVector interpolate(const HhoSpace& space, const ScalarField& f);

/// Square of the broken L2 norm of the cell part of v minus a field f
/// evaluated at quadrature points (f may depend on time externally).
double cell_l2_error_sq(const HhoSpace& space, const Eigen::VectorXd& coeffs,
                        const ScalarField& f);

}  // namespace nlhho
