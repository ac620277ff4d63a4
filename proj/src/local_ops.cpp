#include "nlhho/local_ops.hpp"

#include <cmath>

namespace nlhho {

Eigen::MatrixXd gradient_matrix(const HhoSpace& space, int K) {
  const Mesh& mesh = space.mesh();
  const int gdim = cell_space_dim(space.k());
  const int cbs = space.cell_block_dim();
  const int fbs = space.face_block_dim();
  const int nfaces = static_cast<int>(mesh.cell_faces[K].size());
  const int nloc = cbs + nfaces * fbs;

  // The scalar P^k(K) basis is the leading gdim functions of the cell basis
  // (graded orthonormalization preserves nested spans).
  const auto& rule = space.cell_rule(K);
  const auto& vals = space.cell_values(K);
  const auto& grads = space.cell_gradients(K);

  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(gdim, gdim);
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(2 * gdim, nloc);

  for (std::size_t q = 0; q < rule.size(); ++q) {
    const double w = rule.weights[q];
    const auto phi = vals.col(static_cast<int>(q)).head(gdim);
    mass += w * phi * phi.transpose();
    for (int r = 0; r < 2; ++r)
      rhs.block(r * gdim, 0, gdim, cbs) +=
          w * phi * grads[q].col(r).transpose();
  }

  for (int e = 0; e < nfaces; ++e) {
    const int f = mesh.cell_faces[K][e];
    const Eigen::Vector2d n = mesh.cell_face_normals[K][e];
    const auto& frule = space.face_rule(f);
    const auto& fvals = space.face_values(f);
    const auto& tvals = space.trace_values(K, e);
    for (std::size_t q = 0; q < frule.size(); ++q) {
      const double w = frule.weights[q];
      const auto phi = tvals.col(static_cast<int>(q)).head(gdim);
      const auto tr = tvals.col(static_cast<int>(q));
      const auto psi = fvals.col(static_cast<int>(q));
      for (int r = 0; r < 2; ++r) {
        rhs.block(r * gdim, 0, gdim, cbs) -=
            (w * n(r)) * phi * tr.transpose();
        rhs.block(r * gdim, cbs + e * fbs, gdim, fbs) +=
            (w * n(r)) * phi * psi.transpose();
      }
    }
  }

  const Eigen::LDLT<Eigen::MatrixXd> mass_ldlt(mass);
  Eigen::MatrixXd G(2 * gdim, nloc);
  for (int r = 0; r < 2; ++r)
    G.middleRows(r * gdim, gdim) =
        mass_ldlt.solve(rhs.middleRows(r * gdim, gdim));
  return G;
}

Eigen::MatrixXd jump_matrix(const HhoSpace& space, int K, int e) {
  const Mesh& mesh = space.mesh();
  const int cbs = space.cell_block_dim();
  const int fbs = space.face_block_dim();
  const int nfaces = static_cast<int>(mesh.cell_faces[K].size());
  const int nloc = cbs + nfaces * fbs;
  const int f = mesh.cell_faces[K][e];

  const auto& frule = space.face_rule(f);
  const auto& fvals = space.face_values(f);
  const auto& tvals = space.trace_values(K, e);

  Eigen::MatrixXd fmass = Eigen::MatrixXd::Zero(fbs, fbs);
  Eigen::MatrixXd mixed = Eigen::MatrixXd::Zero(fbs, cbs);
  for (std::size_t q = 0; q < frule.size(); ++q) {
    const double w = frule.weights[q];
    const auto psi = fvals.col(static_cast<int>(q));
    fmass += w * psi * psi.transpose();
    mixed += w * psi * tvals.col(static_cast<int>(q)).transpose();
  }

  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(fbs, nloc);
  J.leftCols(cbs) = fmass.ldlt().solve(mixed);
  J.block(0, cbs + e * fbs, fbs, fbs) = -Eigen::MatrixXd::Identity(fbs, fbs);
  return J;
}

double lambda_face_weight(const HhoSpace& space, int K, int e,
                          const TensorField& lambda) {
  const Mesh& mesh = space.mesh();
  const int f = mesh.cell_faces[K][e];
  const Eigen::Vector2d n = mesh.cell_face_normals[K][e];
  const auto& frule = space.face_rule(f);
  double s = 0.0;
  for (std::size_t q = 0; q < frule.size(); ++q) {
    const double lnn = n.dot(lambda(frule.points[q]) * n);
    s += frule.weights[q] * lnn * lnn;
  }
  if (!(s > 0.0))
    throw std::runtime_error(
        "lambda_face_weight: non-positive stabilization weight (tensor not "
        "elliptic on face)");
  return std::sqrt(s / mesh.face_length[f]);
}

LocalOperatorCache::LocalOperatorCache(const HhoSpace& space, int K,
                                       const TensorField& lambda,
                                       const HhoParams& params)
    : m_space(&space), m_K(K), m_params(params) {
  const Mesh& mesh = space.mesh();
  const int gdim = cell_space_dim(space.k());
  const int cbs = space.cell_block_dim();
  const int nfaces = static_cast<int>(mesh.cell_faces[K].size());
  m_nloc = space.local_dim(K);
  m_h_pow = std::pow(mesh.cell_diameter[K], space.k() + 2);

  m_G = gradient_matrix(space, K);

  const auto& rule = space.cell_rule(K);
  const auto& vals = space.cell_values(K);
  const int nq = static_cast<int>(rule.size());
  m_Gq.reserve(nq);
  m_lambda_q.reserve(nq);
  for (int q = 0; q < nq; ++q) {
    Eigen::MatrixXd gq(2, m_nloc);
    for (int r = 0; r < 2; ++r)
      gq.row(r) =
          vals.col(q).head(gdim).transpose() * m_G.middleRows(r * gdim, gdim);
    m_Gq.push_back(std::move(gq));
    m_lambda_q.push_back(lambda(rule.points[q]));
  }

  m_jump.reserve(nfaces);
  m_jump_rows.reserve(nfaces);
  m_trace_rows.reserve(nfaces);
  m_lambda_face.reserve(nfaces);
  m_stab_scale.reserve(nfaces);
  for (int e = 0; e < nfaces; ++e) {
    const int f = mesh.cell_faces[K][e];
    m_jump.push_back(jump_matrix(space, K, e));
    const auto& fvals = space.face_values(f);
    m_jump_rows.push_back(fvals.transpose() * m_jump.back());
    m_trace_rows.push_back(fvals.transpose() * m_jump.back().leftCols(cbs));
    m_lambda_face.push_back(lambda_face_weight(space, K, e, lambda));
    m_stab_scale.push_back(m_lambda_face.back() / mesh.face_length[f]);
  }

  // Linear form a_K: consistent part G^T (Lambda-weighted vector Gram) G
  // plus eta_l-weighted jump penalization.
  Eigen::MatrixXd lam_gram = Eigen::MatrixXd::Zero(2 * gdim, 2 * gdim);
  for (int q = 0; q < nq; ++q) {
    const double w = rule.weights[q];
    const auto phi = vals.col(q).head(gdim);
    const Eigen::Matrix2d& L = m_lambda_q[q];
    for (int r = 0; r < 2; ++r)
      for (int s = 0; s < 2; ++s)
        lam_gram.block(r * gdim, s * gdim, gdim, gdim) +=
            (w * L(r, s)) * phi * phi.transpose();
  }
  m_aK = m_G.transpose() * lam_gram * m_G;
  for (int e = 0; e < nfaces; ++e) {
    const int f = mesh.cell_faces[K][e];
    const auto& frule = space.face_rule(f);
    const auto& fvals = space.face_values(f);
    Eigen::MatrixXd fmass =
        Eigen::MatrixXd::Zero(space.face_block_dim(), space.face_block_dim());
    for (std::size_t q = 0; q < frule.size(); ++q)
      fmass += frule.weights[q] * fvals.col(static_cast<int>(q)) *
               fvals.col(static_cast<int>(q)).transpose();
    m_aK += (m_params.eta_l * m_stab_scale[e]) * m_jump[e].transpose() *
            fmass * m_jump[e];
  }
}

std::vector<LocalOperatorCache> build_operator_caches(
    const HhoSpace& space, const TensorField& lambda,
    const HhoParams& params) {
  std::vector<LocalOperatorCache> caches;
  const int nc = space.mesh().n_cells();
  caches.reserve(nc);
  for (int K = 0; K < nc; ++K)
    caches.emplace_back(space, K, lambda, params);
  return caches;
}

}  // namespace nlhho
