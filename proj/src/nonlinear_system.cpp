#include "nlhho/nonlinear_system.hpp"

#include <cmath>
#include <vector>

namespace nlhho {

PrevDensity density_from_function(const HhoSpace& space,
                                  const ScalarField& u) {
  PrevDensity d;
  const int nc = space.mesh().n_cells();
  d.values.resize(nc);
  for (int K = 0; K < nc; ++K) {
    const auto& rule = space.cell_rule(K);
    Eigen::VectorXd v(rule.size());
    for (std::size_t q = 0; q < rule.size(); ++q)
      v(static_cast<int>(q)) = u(rule.points[q]);
    d.values[K] = std::move(v);
  }
  return d;
}

PrevDensity density_from_state(const HhoSpace& space,
                               const Eigen::VectorXd& l) {
  PrevDensity d;
  const int nc = space.mesh().n_cells();
  const int cbs = space.cell_block_dim();
  d.values.resize(nc);
  for (int K = 0; K < nc; ++K) {
    const auto& rule = space.cell_rule(K);
    const auto& vals = space.cell_values(K);
    const Eigen::VectorXd cell = l.segment(space.cell_offset(K), cbs);
    Eigen::VectorXd v(rule.size());
    for (std::size_t q = 0; q < rule.size(); ++q)
      v(static_cast<int>(q)) = std::exp(vals.col(static_cast<int>(q)).dot(cell));
    d.values[K] = std::move(v);
  }
  return d;
}

double density_mass(const HhoSpace& space, const PrevDensity& d) {
  double m = 0.0;
  for (int K = 0; K < space.mesh().n_cells(); ++K) {
    const auto& rule = space.cell_rule(K);
    for (std::size_t q = 0; q < rule.size(); ++q)
      m += rule.weights[q] * d.values[K](static_cast<int>(q));
  }
  return m;
}

StepAssembler::StepAssembler(const HhoSpace& space,
                             const std::vector<LocalOperatorCache>& caches,
                             Eigen::VectorXd phi, double overflow_guard)
    : m_space(&space),
      m_caches(&caches),
      m_phi(std::move(phi)),
      m_guard(overflow_guard) {}

std::optional<Eigen::VectorXd> StepAssembler::residual(
    const Eigen::VectorXd& l, const PrevDensity& prev, double dt) const {
  const HhoSpace& space = *m_space;
  const Mesh& mesh = space.mesh();
  const int cbs = space.cell_block_dim();
  const int fbs = space.face_block_dim();

  Eigen::VectorXd R = Eigen::VectorXd::Zero(space.n_dofs());

  for (int K = 0; K < mesh.n_cells(); ++K) {
    const auto& cache = (*m_caches)[K];
    const auto idx = space.local_to_global(K);
    const int nloc = cache.n_local();

    Eigen::VectorXd lK(nloc), wK(nloc);
    for (int i = 0; i < nloc; ++i) {
      lK(i) = l(idx[i]);
      wK(i) = lK(i) + m_phi(idx[i]);
    }

    Eigen::VectorXd r = Eigen::VectorXd::Zero(nloc);

    // Cell-quadrature terms: mass and the consistent nonlinear part.
    const auto& rule = space.cell_rule(K);
    const auto& vals = space.cell_values(K);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const int qi = static_cast<int>(q);
      const double lq = vals.col(qi).dot(lK.head(cbs));
      if (!(lq <= m_guard)) return std::nullopt;
      const double u = std::exp(lq);
      const double w = rule.weights[q];

      r.head(cbs) += (w / dt) * (u - prev.values[K](qi)) * vals.col(qi);

      const auto& Gq = cache.gradient_at(qi);
      const Eigen::Vector2d flux = cache.lambda_at(qi) * (Gq * wK);
      r += (w * u) * (Gq.transpose() * flux);
    }

    // Face stabilization terms.
    const double eta_nl = cache.params().eta_nl;
    for (int e = 0; e < cache.n_faces(); ++e) {
      const int f = mesh.cell_faces[K][e];
      const auto& frule = space.face_rule(f);
      const auto& fvals = space.face_values(f);
      const auto& jrows = cache.jump_rows(e);
      const auto& trows = cache.trace_rows(e);
      for (std::size_t q = 0; q < frule.size(); ++q) {
        const int qi = static_cast<int>(q);
        const double trace_l = trows.row(qi).dot(lK.head(cbs));
        const double face_l = fvals.col(qi).dot(lK.segment(cbs + e * fbs, fbs));
        if (!(trace_l <= m_guard) || !(face_l <= m_guard))
          return std::nullopt;
        const double c = 0.5 * (std::exp(trace_l) + std::exp(face_l));
        const double jw = jrows.row(qi).dot(wK);
        r += (eta_nl * cache.stab_scale(e) * frule.weights[q] * c * jw) *
             jrows.row(qi).transpose();
      }
    }

    // Linear perturbation.
    r += (cache.params().epsilon * cache.h_pow()) * (cache.aK() * wK);

    for (int i = 0; i < nloc; ++i) R(idx[i]) += r(i);
  }
  return R;
}

std::optional<JacobianSystem> StepAssembler::jacobian(const Eigen::VectorXd& l,
                                                      double dt) const {
  const HhoSpace& space = *m_space;
  const Mesh& mesh = space.mesh();
  const int cbs = space.cell_block_dim();
  const int fbs = space.face_block_dim();

  JacobianSystem J;
  J.local.resize(mesh.n_cells());

  for (int K = 0; K < mesh.n_cells(); ++K) {
    const auto& cache = (*m_caches)[K];
    const auto idx = space.local_to_global(K);
    const int nloc = cache.n_local();

    Eigen::VectorXd lK(nloc), wK(nloc);
    for (int i = 0; i < nloc; ++i) {
      lK(i) = l(idx[i]);
      wK(i) = lK(i) + m_phi(idx[i]);
    }

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nloc, nloc);

    const auto& rule = space.cell_rule(K);
    const auto& vals = space.cell_values(K);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const int qi = static_cast<int>(q);
      const double lq = vals.col(qi).dot(lK.head(cbs));
      if (!(lq <= m_guard)) return std::nullopt;
      const double u = std::exp(lq);
      const double w = rule.weights[q];

      // Mass term derivative.
      A.topLeftCorner(cbs, cbs) +=
          (w / dt * u) * vals.col(qi) * vals.col(qi).transpose();

      const auto& Gq = cache.gradient_at(qi);
      const Eigen::Matrix2d& L = cache.lambda_at(qi);
      // d/dw of the consistent term.
      A += (w * u) * (Gq.transpose() * (L * Gq));
      // d/dl of the exponential weight (cell block only).
      const Eigen::VectorXd gv = Gq.transpose() * (L * (Gq * wK));
      A.leftCols(cbs) += (w * u) * gv * vals.col(qi).transpose();
    }

    const double eta_nl = cache.params().eta_nl;
    for (int e = 0; e < cache.n_faces(); ++e) {
      const int f = mesh.cell_faces[K][e];
      const auto& frule = space.face_rule(f);
      const auto& fvals = space.face_values(f);
      const auto& jrows = cache.jump_rows(e);
      const auto& trows = cache.trace_rows(e);
      const double scale = eta_nl * cache.stab_scale(e);
      for (std::size_t q = 0; q < frule.size(); ++q) {
        const int qi = static_cast<int>(q);
        const double trace_l = trows.row(qi).dot(lK.head(cbs));
        const double face_l = fvals.col(qi).dot(lK.segment(cbs + e * fbs, fbs));
        if (!(trace_l <= m_guard) || !(face_l <= m_guard))
          return std::nullopt;
        const double et = std::exp(trace_l);
        const double ef = std::exp(face_l);
        const double c = 0.5 * (et + ef);
        const double jw = jrows.row(qi).dot(wK);
        const double wq = frule.weights[q];

        A += (scale * wq * c) * jrows.row(qi).transpose() * jrows.row(qi);

        Eigen::RowVectorXd dc = Eigen::RowVectorXd::Zero(nloc);
        dc.head(cbs) = (0.5 * et) * trows.row(qi);
        dc.segment(cbs + e * fbs, fbs) = (0.5 * ef) * fvals.col(qi).transpose();
        A += (scale * wq * jw) * jrows.row(qi).transpose() * dc;
      }
    }

    A += (cache.params().epsilon * cache.h_pow()) * cache.aK();
    J.local[K] = std::move(A);
  }
  return J;
}

std::optional<CondensedSystem> condense(const HhoSpace& space,
                                        const JacobianSystem& J,
                                        const Eigen::VectorXd& rhs) {
  const Mesh& mesh = space.mesh();
  const int cbs = space.cell_block_dim();
  const int fbs = space.face_block_dim();
  const int nfd = space.n_face_dofs();

  CondensedSystem cs;
  cs.b = rhs.tail(nfd);
  cs.rec_mat.resize(mesh.n_cells());
  cs.rec_vec.resize(mesh.n_cells());

  std::vector<Eigen::Triplet<double>> trips;
  for (int K = 0; K < mesh.n_cells(); ++K) {
    const auto& A = J.local[K];
    const int nlf = static_cast<int>(A.rows()) - cbs;

    const Eigen::FullPivLU<Eigen::MatrixXd> lu(A.topLeftCorner(cbs, cbs));
    if (!lu.isInvertible()) return std::nullopt;

    const Eigen::MatrixXd X = lu.solve(A.topRightCorner(cbs, nlf));
    const Eigen::VectorXd y =
        lu.solve(rhs.segment(space.cell_offset(K), cbs));
    const Eigen::MatrixXd S =
        A.bottomRightCorner(nlf, nlf) - A.bottomLeftCorner(nlf, cbs) * X;
    const Eigen::VectorXd g = A.bottomLeftCorner(nlf, cbs) * y;

    const auto& faces = mesh.cell_faces[K];
    std::vector<int> fidx(nlf);
    for (std::size_t e = 0; e < faces.size(); ++e)
      for (int b = 0; b < fbs; ++b)
        fidx[e * fbs + b] = faces[e] * fbs + b;

    for (int i = 0; i < nlf; ++i) {
      cs.b(fidx[i]) -= g(i);
      for (int j = 0; j < nlf; ++j)
        trips.emplace_back(fidx[i], fidx[j], S(i, j));
    }
    cs.rec_mat[K] = X;
    cs.rec_vec[K] = y;
  }

  cs.A.resize(nfd, nfd);
  cs.A.setFromTriplets(trips.begin(), trips.end());
  cs.A.makeCompressed();
  return cs;
}

Eigen::VectorXd expand(const HhoSpace& space, const CondensedSystem& cs,
                       const Eigen::VectorXd& xf) {
  const Mesh& mesh = space.mesh();
  const int cbs = space.cell_block_dim();
  const int fbs = space.face_block_dim();

  Eigen::VectorXd x(space.n_dofs());
  x.tail(space.n_face_dofs()) = xf;
  for (int K = 0; K < mesh.n_cells(); ++K) {
    const auto& faces = mesh.cell_faces[K];
    Eigen::VectorXd xf_loc(static_cast<int>(faces.size()) * fbs);
    for (std::size_t e = 0; e < faces.size(); ++e)
      xf_loc.segment(static_cast<int>(e) * fbs, fbs) =
          xf.segment(faces[e] * fbs, fbs);
    x.segment(space.cell_offset(K), cbs) =
        cs.rec_vec[K] - cs.rec_mat[K] * xf_loc;
  }
  return x;
}

Eigen::SparseMatrix<double> full_matrix(const HhoSpace& space,
                                        const JacobianSystem& J) {
  std::vector<Eigen::Triplet<double>> trips;
  for (int K = 0; K < space.mesh().n_cells(); ++K) {
    const auto idx = space.local_to_global(K);
    const auto& A = J.local[K];
    for (int i = 0; i < A.rows(); ++i)
      for (int j = 0; j < A.cols(); ++j)
        if (A(i, j) != 0.0) trips.emplace_back(idx[i], idx[j], A(i, j));
  }
  Eigen::SparseMatrix<double> M(space.n_dofs(), space.n_dofs());
  M.setFromTriplets(trips.begin(), trips.end());
  M.makeCompressed();
  return M;
}

std::optional<Eigen::VectorXd> FaceSolver::solve(
    const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& b) {
  if (!m_analyzed || m_rows != A.rows()) {
    m_lu.analyzePattern(A);
    m_analyzed = true;
    m_rows = A.rows();
  }
  m_lu.factorize(A);
  if (m_lu.info() != Eigen::Success) return std::nullopt;
  Eigen::VectorXd x = m_lu.solve(b);
  if (m_lu.info() != Eigen::Success) return std::nullopt;
  return x;
}

NewtonResult newton_solve(const StepAssembler& assembler,
                          const Eigen::VectorXd& l_init,
                          const PrevDensity& prev, double dt,
                          const NewtonConfig& config, FaceSolver& solver) {
  NewtonResult res;
  res.l = l_init;

  auto R = assembler.residual(res.l, prev, dt);
  if (!R) {
    res.failure = "overflow in residual at initial guess";
    return res;
  }
  const double r0 = R->lpNorm<Eigen::Infinity>();
  const double tol = std::max(config.tol_abs, config.tol_rel * r0);

  for (;;) {
    res.residual_norm = R->lpNorm<Eigen::Infinity>();
    if (res.residual_norm <= tol) {
      res.converged = true;
      return res;
    }
    if (res.iterations >= config.max_iterations) {
      res.failure = "iteration limit reached";
      return res;
    }

    const auto J = assembler.jacobian(res.l, dt);
    if (!J) {
      res.failure = "overflow in Jacobian";
      return res;
    }
    const auto cs = condense(assembler.space(), *J, -*R);
    if (!cs) {
      res.failure = "singular cell block in condensation";
      return res;
    }
    const auto xf = solver.solve(cs->A, cs->b);
    ++res.linear_solves;
    if (!xf) {
      res.failure = "sparse factorization failed";
      return res;
    }

    res.l += expand(assembler.space(), *cs, *xf);
    ++res.iterations;

    R = assembler.residual(res.l, prev, dt);
    if (!R) {
      res.failure = "overflow in residual";
      return res;
    }
  }
}

StepOutcome adaptive_step(const StepAssembler& assembler,
                          const Eigen::VectorXd& l_prev,
                          const PrevDensity& prev, TimeController& control,
                          const NewtonConfig& config, FaceSolver& solver) {
  StepOutcome out;
  const double dt_min = std::ldexp(control.dt_init, -config.dt_min_exponent);

  double dt_try = control.dt;
  for (;;) {
    NewtonResult res =
        newton_solve(assembler, l_prev, prev, dt_try, config, solver);
    out.linear_solves += res.linear_solves;
    out.newton_iterations += res.iterations;
    if (res.converged) {
      out.accepted = true;
      out.dt_used = dt_try;
      out.l = std::move(res.l);
      control.dt = std::min(config.dt_doubling * dt_try, control.dt_init);
      return out;
    }
    dt_try *= config.dt_halving;
    if (dt_try < dt_min) {
      out.failure = "time step underflow (last Newton failure: " +
                    res.failure + ")";
      return out;
    }
  }
}

}  // namespace nlhho
