#include "nlhho/nonlinear_forms.hpp"

#include <cmath>

namespace nlhho {

namespace {

double guarded_exp(double x, double guard) {
  if (!(x <= guard)) throw DivergedState();
  return std::exp(x);
}

}  // namespace

double bilinear_aK(const LocalOperatorCache& cache, const Eigen::VectorXd& w,
                   const Eigen::VectorXd& v) {
  return w.dot(cache.aK() * v);
}

double nonlinear_CK(const LocalOperatorCache& cache, const Eigen::VectorXd& l,
                    const Eigen::VectorXd& w, const Eigen::VectorXd& v,
                    double guard) {
  const HhoSpace& space = cache.space();
  const int K = cache.cell();
  const auto& rule = space.cell_rule(K);
  const auto& vals = space.cell_values(K);
  const int cbs = space.cell_block_dim();

  double s = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const double lq = vals.col(static_cast<int>(q)).dot(l.head(cbs));
    const double u = guarded_exp(lq, guard);
    const auto& Gq = cache.gradient_at(static_cast<int>(q));
    const Eigen::Vector2d gw = Gq * w;
    const Eigen::Vector2d gv = Gq * v;
    s += rule.weights[q] * u *
         gv.dot(cache.lambda_at(static_cast<int>(q)) * gw);
  }
  return s;
}

double nonlinear_SK(const LocalOperatorCache& cache, const Eigen::VectorXd& l,
                    const Eigen::VectorXd& w, const Eigen::VectorXd& v,
                    double guard) {
  const HhoSpace& space = cache.space();
  const Mesh& mesh = space.mesh();
  const int K = cache.cell();
  const int cbs = space.cell_block_dim();
  const int fbs = space.face_block_dim();

  double s = 0.0;
  for (int e = 0; e < cache.n_faces(); ++e) {
    const int f = mesh.cell_faces[K][e];
    const auto& frule = space.face_rule(f);
    const auto& fvals = space.face_values(f);
    const auto& jrows = cache.jump_rows(e);
    const auto& trows = cache.trace_rows(e);
    double face_sum = 0.0;
    for (std::size_t q = 0; q < frule.size(); ++q) {
      const int qi = static_cast<int>(q);
      const double trace_l = trows.row(qi).dot(l.head(cbs));
      const double face_l =
          fvals.col(qi).dot(l.segment(cbs + e * fbs, fbs));
      const double weight =
          0.5 * (guarded_exp(trace_l, guard) + guarded_exp(face_l, guard));
      face_sum +=
          frule.weights[q] * weight * (jrows.row(qi).dot(w)) *
          (jrows.row(qi).dot(v));
    }
    s += cache.stab_scale(e) * face_sum;
  }
  return cache.params().eta_nl * s;
}

double local_TK(const LocalOperatorCache& cache, const Eigen::VectorXd& l,
                const Eigen::VectorXd& w, const Eigen::VectorXd& v,
                double guard) {
  return nonlinear_CK(cache, l, w, v, guard) +
         nonlinear_SK(cache, l, w, v, guard) +
         cache.params().epsilon * cache.h_pow() * bilinear_aK(cache, w, v);
}

double global_TD(const std::vector<LocalOperatorCache>& caches,
                 const Eigen::VectorXd& l, const Eigen::VectorXd& w,
                 const Eigen::VectorXd& v, double guard) {
  double s = 0.0;
  for (const auto& cache : caches) {
    const HhoSpace& space = cache.space();
    const auto idx = space.local_to_global(cache.cell());
    Eigen::VectorXd lK(idx.size()), wK(idx.size()), vK(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
      lK(static_cast<int>(i)) = l(idx[i]);
      wK(static_cast<int>(i)) = w(idx[i]);
      vK(static_cast<int>(i)) = v(idx[i]);
    }
    s += local_TK(cache, lK, wK, vK, guard);
  }
  return s;
}

}  // namespace nlhho
