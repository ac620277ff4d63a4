// Exponential-weighted forms against independent pointwise reassembly.
#include <doctest.h>

#include <cmath>
#include <random>

#include "nlhho/mesh_gen.hpp"
#include "nlhho/nonlinear_forms.hpp"
#include "oracles.hpp"

using namespace nlhho;

namespace {

const TensorField identity_tensor = [](const Eigen::Vector2d&) {
  return Eigen::Matrix2d::Identity();
};

Eigen::VectorXd random_vector(std::mt19937& rng, int n, double amp = 1.0) {
  std::uniform_real_distribution<double> unif(-amp, amp);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = unif(rng);
  return v;
}

}  // namespace

TEST_CASE("consistent term matches pointwise quadrature") {
  std::mt19937 rng(2718);
  const TensorField aniso = [](const Eigen::Vector2d& x) {
    Eigen::Matrix2d m;
    m << 2.0 + std::sin(x.x()), 0.3, 0.3, 1.0 + 0.5 * x.y();
    return m;
  };
  for (int k : {0, 1, 2}) {
    const Mesh mesh = single_cell_mesh(oracle::random_convex_polygon(rng, 5));
    const HhoSpace space(mesh, k);
    LocalOperatorCache cache(space, 0, aniso, HhoParams{});
    const int gdim = cell_space_dim(k);
    const int cbs = space.cell_block_dim();
    const Eigen::MatrixXd G = gradient_matrix(space, 0);

    const Eigen::VectorXd l = random_vector(rng, space.local_dim(0), 0.5);
    const Eigen::VectorXd w = random_vector(rng, space.local_dim(0));
    const Eigen::VectorXd v = random_vector(rng, space.local_dim(0));
    const Eigen::VectorXd gw = G * w, gv = G * v;

    double ref = 0.0;
    const auto& rule = space.cell_rule(0);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Eigen::Vector2d& x = rule.points[q];
      const Eigen::VectorXd full = space.cell_basis(0).values(x);
      const Eigen::VectorXd phi = full.head(gdim);
      const double u = std::exp(full.dot(l.head(cbs)));
      const Eigen::Vector2d Gw(gw.head(gdim).dot(phi), gw.tail(gdim).dot(phi));
      const Eigen::Vector2d Gv(gv.head(gdim).dot(phi), gv.tail(gdim).dot(phi));
      ref += rule.weights[q] * u * Gv.dot(aniso(x) * Gw);
    }
    CHECK(nonlinear_CK(cache, l, w, v) == doctest::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("jump stabilization matches pointwise quadrature") {
  std::mt19937 rng(161803);
  for (int k : {0, 1}) {
    const Mesh mesh = single_cell_mesh(oracle::random_convex_polygon(rng, 4));
    const HhoSpace space(mesh, k);
    HhoParams params;
    params.eta_nl = 2.3;
    LocalOperatorCache cache(space, 0, identity_tensor, params);
    const int cbs = space.cell_block_dim();
    const int fbs = space.face_block_dim();

    const Eigen::VectorXd l = random_vector(rng, space.local_dim(0), 0.5);
    const Eigen::VectorXd w = random_vector(rng, space.local_dim(0));
    const Eigen::VectorXd v = random_vector(rng, space.local_dim(0));

    double ref = 0.0;
    for (std::size_t e = 0; e < mesh.cell_faces[0].size(); ++e) {
      const std::size_t f = mesh.cell_faces[0][e];
      const auto& frule = space.face_rule(f);
      const Eigen::MatrixXd J =
          jump_matrix(space, 0, static_cast<int>(e));
      const Eigen::VectorXd jw = J * w, jv = J * v;
      // Independent face projection of the cell polynomial of l.
      const Eigen::VectorXd ltrace = l2_project_face(
          [&](const Eigen::Vector2d& x) {
            return space.cell_basis(0).values(x).dot(l.head(cbs));
          },
          space.face_basis(f), frule);
      const double scale =
          lambda_face_weight(space, 0, static_cast<int>(e), identity_tensor) /
          mesh.face_length[f];
      double acc = 0.0;
      for (std::size_t q = 0; q < frule.size(); ++q) {
        const Eigen::VectorXd psi = space.face_basis(f).values(frule.points[q]);
        const double tau = psi.dot(ltrace);
        const double s =
            psi.dot(l.segment(cbs + static_cast<int>(e) * fbs, fbs));
        const double weight = 0.5 * (std::exp(tau) + std::exp(s));
        acc += frule.weights[q] * weight * jw.dot(psi) * jv.dot(psi);
      }
      ref += params.eta_nl * scale * acc;
    }
    CHECK(nonlinear_SK(cache, l, w, v) == doctest::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("full local form composition and symmetry") {
  std::mt19937 rng(42);
  const Mesh mesh = single_cell_mesh(oracle::random_convex_polygon(rng, 6));
  for (int k : {0, 1}) {
    const HhoSpace space(mesh, k);
    HhoParams params;
    params.epsilon = 2.5;
    LocalOperatorCache cache(space, 0, identity_tensor, params);

    const Eigen::VectorXd l = random_vector(rng, space.local_dim(0), 0.4);
    const Eigen::VectorXd w = random_vector(rng, space.local_dim(0));
    const Eigen::VectorXd v = random_vector(rng, space.local_dim(0));

    const double composed = nonlinear_CK(cache, l, w, v) +
                            nonlinear_SK(cache, l, w, v) +
                            params.epsilon * cache.h_pow() *
                                bilinear_aK(cache, w, v);
    CHECK(local_TK(cache, l, w, v) == doctest::Approx(composed).epsilon(1e-13));

    // h_K^{k+2} weight.
    CHECK(cache.h_pow() ==
          doctest::Approx(std::pow(mesh.cell_diameter[0], k + 2))
              .epsilon(1e-13));

    // Symmetry in the last two slots.
    CHECK(local_TK(cache, l, w, v) ==
          doctest::Approx(local_TK(cache, l, v, w)).epsilon(1e-12));

    // Positivity of the quadratic form.
    for (int trial = 0; trial < 50; ++trial) {
      const Eigen::VectorXd z = random_vector(rng, space.local_dim(0));
      CHECK(local_TK(cache, l, z, z) >= -1e-12 * z.squaredNorm());
    }
  }
}

TEST_CASE("a zero log-state reduces the nonlinear terms to linear ones") {
  std::mt19937 rng(64);
  const Mesh mesh = single_cell_mesh(oracle::random_convex_polygon(rng, 4));
  const HhoSpace space(mesh, 1);
  HhoParams no_stab;
  no_stab.eta_l = 0.0;
  LocalOperatorCache consistency_only(space, 0, identity_tensor, no_stab);
  LocalOperatorCache cache(space, 0, identity_tensor, HhoParams{});

  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(space.local_dim(0));
  const Eigen::VectorXd w = random_vector(rng, space.local_dim(0));
  const Eigen::VectorXd v = random_vector(rng, space.local_dim(0));

  // e^0 = 1: C_K equals the unstabilized part of a_K, and S_K equals the
  // eta-weighted jump part.
  CHECK(nonlinear_CK(cache, zero, w, v) ==
        doctest::Approx(bilinear_aK(consistency_only, w, v)).epsilon(1e-12));
  CHECK(nonlinear_CK(cache, zero, w, v) + nonlinear_SK(cache, zero, w, v) ==
        doctest::Approx(bilinear_aK(cache, w, v)).epsilon(1e-12));
}

TEST_CASE("overflow guard trips on extreme states") {
  std::mt19937 rng(13);
  const Mesh mesh = single_cell_mesh(oracle::random_convex_polygon(rng, 4));
  const HhoSpace space(mesh, 0);
  LocalOperatorCache cache(space, 0, identity_tensor, HhoParams{});
  Eigen::VectorXd huge = Eigen::VectorXd::Zero(space.local_dim(0));
  huge[0] = 1e6;
  const Eigen::VectorXd v = random_vector(rng, space.local_dim(0));
  CHECK_THROWS_AS(nonlinear_CK(cache, huge, v, v), DivergedState);
  CHECK_THROWS_AS(nonlinear_SK(cache, huge, v, v), DivergedState);
}

TEST_CASE("global form: gather over cells and conservation identity") {
  std::mt19937 rng(271);
  const Mesh mesh = gen_triangular(3);
  const HhoSpace space(mesh, 1);
  const auto caches = build_operator_caches(space, identity_tensor, HhoParams{});

  const Eigen::VectorXd l = random_vector(rng, space.n_dofs(), 0.3);
  const Eigen::VectorXd w = random_vector(rng, space.n_dofs());
  const Eigen::VectorXd v = random_vector(rng, space.n_dofs());

  double manual = 0.0;
  DiscreteVector lv(space, l), wv(space, w), vv(space, v);
  for (std::size_t K = 0; K < mesh.n_cells(); ++K)
    manual += local_TK(caches[K], lv.local(static_cast<int>(K)),
                       wv.local(static_cast<int>(K)),
                       vv.local(static_cast<int>(K)));
  CHECK(global_TD(caches, l, w, v) == doctest::Approx(manual).epsilon(1e-13));

  // Testing against the constant function yields zero: mass conservation.
  const DiscreteVector ones =
      interpolate(space, [](const Eigen::Vector2d&) { return 1.0; });
  CHECK(std::abs(global_TD(caches, l, w, ones.coeffs)) < 1e-11);
}
