#include "nlhho/hho_space.hpp"

namespace nlhho {

HhoSpace::HhoSpace(const Mesh& mesh, int k, int quad_order)
    : m_mesh(&mesh), m_k(k) {
  if (k < 0) throw std::runtime_error("HhoSpace: k must be >= 0");
  m_quad_order = quad_order >= 0 ? quad_order : 2 * k + 5;

  const int nc = mesh.n_cells();
  const int nf = mesh.n_faces();

  m_cell_rule.reserve(nc);
  m_cell_basis.reserve(nc);
  for (int K = 0; K < nc; ++K) {
    const auto poly = mesh.cell_polygon(K);
    m_cell_rule.push_back(cell_quadrature(poly, m_quad_order));
    m_cell_basis.emplace_back(poly, m_k + 1, m_cell_rule.back());
  }

  m_face_rule.reserve(nf);
  m_face_basis.reserve(nf);
  for (int f = 0; f < nf; ++f) {
    const auto ends = mesh.face_endpoints(f);
    m_face_rule.push_back(face_quadrature(ends[0], ends[1], m_quad_order));
    m_face_basis.emplace_back(ends[0], ends[1], m_k);
  }

  m_cell_vals.resize(nc);
  m_cell_grads.resize(nc);
  for (int K = 0; K < nc; ++K) {
    const auto& rule = m_cell_rule[K];
    const int nq = static_cast<int>(rule.size());
    const int dim = m_cell_basis[K].dimension();
    m_cell_vals[K].resize(dim, nq);
    m_cell_grads[K].reserve(nq);
    for (int q = 0; q < nq; ++q) {
      m_cell_vals[K].col(q) = m_cell_basis[K].values(rule.points[q]);
      m_cell_grads[K].push_back(m_cell_basis[K].gradients(rule.points[q]));
    }
  }

  m_face_vals.resize(nf);
  for (int f = 0; f < nf; ++f) {
    const auto& rule = m_face_rule[f];
    const int nq = static_cast<int>(rule.size());
    const int dim = m_face_basis[f].dimension();
    m_face_vals[f].resize(dim, nq);
    for (int q = 0; q < nq; ++q)
      m_face_vals[f].col(q) = m_face_basis[f].values(rule.points[q]);
  }

  m_trace_vals.resize(nc);
  for (int K = 0; K < nc; ++K) {
    const auto& faces = mesh.cell_faces[K];
    m_trace_vals[K].resize(faces.size());
    for (std::size_t e = 0; e < faces.size(); ++e) {
      const auto& rule = m_face_rule[faces[e]];
      const int nq = static_cast<int>(rule.size());
      const int dim = m_cell_basis[K].dimension();
      m_trace_vals[K][e].resize(dim, nq);
      for (int q = 0; q < nq; ++q)
        m_trace_vals[K][e].col(q) = m_cell_basis[K].values(rule.points[q]);
    }
  }
}

std::vector<int> HhoSpace::local_to_global(int K) const {
  std::vector<int> idx;
  idx.reserve(local_dim(K));
  for (int a = 0; a < cell_block_dim(); ++a) idx.push_back(cell_offset(K) + a);
  for (int f : m_mesh->cell_faces[K])
    for (int b = 0; b < face_block_dim(); ++b)
      idx.push_back(face_offset(f) + b);
  return idx;
}

Eigen::VectorXd DiscreteVector::local(int K) const {
  const auto idx = m_space->local_to_global(K);
  Eigen::VectorXd out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out(i) = coeffs(idx[i]);
  return out;
}

DiscreteVector interpolate(const HhoSpace& space, const ScalarField& f) {
  DiscreteVector v(space);
  const Mesh& mesh = space.mesh();
  for (int K = 0; K < mesh.n_cells(); ++K)
    v.cell_block(K) =
        l2_project_cell(f, space.cell_basis(K), space.cell_rule(K));
  for (int fc = 0; fc < mesh.n_faces(); ++fc)
    v.face_block(fc) =
        l2_project_face(f, space.face_basis(fc), space.face_rule(fc));
  return v;
}

double cell_l2_error_sq(const HhoSpace& space, const Eigen::VectorXd& coeffs,
                        const ScalarField& f) {
  double err = 0.0;
  const Mesh& mesh = space.mesh();
  for (int K = 0; K < mesh.n_cells(); ++K) {
    const auto& rule = space.cell_rule(K);
    const Eigen::VectorXd cell =
        coeffs.segment(space.cell_offset(K), space.cell_block_dim());
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double v = space.cell_values(K).col(q).dot(cell);
      const double d = v - f(rule.points[q]);
      err += rule.weights[q] * d * d;
    }
  }
  return err;
}

}  // namespace nlhho
