// Per-cell operators: gradient reconstruction, face jumps, stabilization
// weights and the linear bilinear form, cached with quadrature-point tables.
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "nlhho/hho_space.hpp"

namespace nlhho {

using TensorField = std::function<Eigen::Matrix2d(const Eigen::Vector2d&)>;

/// Scheme parameters: jump penalties and the h^{k+2}-weighted linear
/// perturbation coefficient.
struct HhoParams {
  double epsilon = 1.0;
  double eta_l = 1.0;
  double eta_nl = 1.0;
};

/// Reconstructed-gradient matrix of cell K: maps the local hybrid vector
/// (cell block, then face blocks) to coefficients of a vector polynomial in
/// P^k(K)^2, stored as [x-component block; y-component block]. Defined by
///   (G(v), tau)_K = (grad v_K, tau)_K + sum_sigma (v_sigma - v_K, tau.n)_sigma
/// for all tau in P^k(K)^2, so that G of an interpolate commutes with the
/// P^k(K)^2 projection of the gradient.
Eigen::MatrixXd gradient_matrix(const HhoSpace& space, int K);

/// Jump matrix of face e (local index) of cell K: maps the local hybrid
/// vector to face-basis coefficients of Pi_sigma^k(v_K) - v_sigma.
Eigen::MatrixXd jump_matrix(const HhoSpace& space, int K, int e);

/// Face stabilization weight: root-mean-square over sigma of the normal
/// diffusivity Lambda n . n, i.e. sqrt((1/|sigma|) int_sigma (Lambda n.n)^2).
/// Dimensionally a diffusivity, so the penalty coefficient weight/h_sigma
/// scales as 1/h; an |sigma|^(1/2)-inflated weight weakens the penalty to
/// h^(-1/2) and measurably costs one order of L2 convergence.
double lambda_face_weight(const HhoSpace& space, int K, int e,
                          const TensorField& lambda);

/// All cached operators of one cell.
class LocalOperatorCache {
 public:
  LocalOperatorCache(const HhoSpace& space, int K, const TensorField& lambda,
                     const HhoParams& params);

  const HhoSpace& space() const { return *m_space; }
  int cell() const { return m_K; }
  int n_local() const { return m_nloc; }
  int n_faces() const { return static_cast<int>(m_jump.size()); }

  const Eigen::MatrixXd& gradient() const { return m_G; }
  /// Gradient applied at cell quadrature point q: 2 x nloc.
  const Eigen::MatrixXd& gradient_at(int q) const { return m_Gq[q]; }
  const Eigen::MatrixXd& jump(int e) const { return m_jump[e]; }
  /// Rows of jump values at the quadrature points of face e: nqf x nloc.
  const Eigen::MatrixXd& jump_rows(int e) const { return m_jump_rows[e]; }
  /// Rows of the face projection of the cell polynomial: nqf x cell dim.
  const Eigen::MatrixXd& trace_rows(int e) const { return m_trace_rows[e]; }
  double lambda_face(int e) const { return m_lambda_face[e]; }
  /// eta-independent stabilization scale Lambda_{K,sigma}/h_sigma of face e.
  double stab_scale(int e) const { return m_stab_scale[e]; }
  const Eigen::Matrix2d& lambda_at(int q) const { return m_lambda_q[q]; }
  const Eigen::MatrixXd& aK() const { return m_aK; }
  double h_pow() const { return m_h_pow; }  // h_K^{k+2}
  const HhoParams& params() const { return m_params; }

 private:
  const HhoSpace* m_space;
  int m_K;
  int m_nloc;
  HhoParams m_params;
  double m_h_pow;
  Eigen::MatrixXd m_G;
  std::vector<Eigen::MatrixXd> m_Gq;
  std::vector<Eigen::MatrixXd> m_jump;
  std::vector<Eigen::MatrixXd> m_jump_rows;
  std::vector<Eigen::MatrixXd> m_trace_rows;
  std::vector<double> m_lambda_face;
  std::vector<double> m_stab_scale;
  std::vector<Eigen::Matrix2d> m_lambda_q;
  Eigen::MatrixXd m_aK;
};

std::vector<LocalOperatorCache> build_operator_caches(const HhoSpace& space,
                                                      const TensorField& lambda,
                                                      const HhoParams& params);

}  // namespace nlhho
