// Orthonormal cell/face bases and L2 projectors.
#include <doctest.h>

#include <cmath>
#include <random>

#include "nlhho/basis.hpp"
#include "nlhho/quadrature.hpp"
#include "oracles.hpp"

using namespace nlhho;

namespace {

const std::vector<Eigen::Vector2d> unit_square = {
    {0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};

}  // namespace

TEST_CASE("cell basis is orthonormal w.r.t. the cell inner product") {
  std::mt19937 rng(5150);
  for (int deg = 0; deg <= 4; ++deg) {
    for (int nv : {3, 4, 6}) {
      const auto poly = oracle::random_convex_polygon(rng, nv);
      const auto rule = cell_quadrature(poly, 2 * deg + 2);
      CellBasis basis(poly, deg, rule);
      const int dim = basis.dimension();
      REQUIRE(dim == cell_space_dim(deg));
      Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(dim, dim);
      for (std::size_t q = 0; q < rule.size(); ++q) {
        const Eigen::VectorXd v = basis.values(rule.points[q]);
        gram += rule.weights[q] * v * v.transpose();
      }
      CHECK((gram - Eigen::MatrixXd::Identity(dim, dim)).cwiseAbs().maxCoeff() <
            1e-12);
    }
  }
}

TEST_CASE("cell projector reproduces members of the space") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int deg = 0; deg <= 3; ++deg) {
    const auto poly = oracle::random_convex_polygon(rng, 5);
    const auto rule = cell_quadrature(poly, 2 * deg + 2);
    CellBasis basis(poly, deg, rule);
    Eigen::VectorXd coeffs(basis.dimension());
    for (int i = 0; i < coeffs.size(); ++i) coeffs[i] = unif(rng);
    auto f = [&](const Eigen::Vector2d& x) {
      return coeffs.dot(basis.values(x));
    };
    const Eigen::VectorXd proj = l2_project_cell(f, basis, rule);
    CHECK((proj - coeffs).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("cell projector is orthogonal: residual kills the space") {
  std::mt19937 rng(88);
  for (int deg = 0; deg <= 3; ++deg) {
    const auto poly = oracle::random_convex_polygon(rng, 4);
    const auto rule = cell_quadrature(poly, 2 * deg + 6);
    CellBasis basis(poly, deg, rule);
    auto f = [](const Eigen::Vector2d& x) {
      return std::exp(x.x() - 0.3 * x.y()) + std::sin(3.0 * x.x() * x.y());
    };
    const Eigen::VectorXd proj = l2_project_cell(f, basis, rule);
    Eigen::VectorXd moments = Eigen::VectorXd::Zero(basis.dimension());
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double resid =
          f(rule.points[q]) - proj.dot(basis.values(rule.points[q]));
      moments += (rule.weights[q] * resid) * basis.values(rule.points[q]);
    }
    CHECK(moments.cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("degree-0 cell projection of exp(x) on the unit square is its mean") {
  const auto rule = cell_quadrature(unit_square, 8);
  CellBasis basis(unit_square, 0, rule);
  auto f = [](const Eigen::Vector2d& x) { return std::exp(x.x()); };
  const Eigen::VectorXd proj = l2_project_cell(f, basis, rule);
  const double value = proj.dot(basis.values(Eigen::Vector2d(0.5, 0.5)));
  CHECK(value == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));
}

TEST_CASE("cell gradients are consistent with divided differences") {
  std::mt19937 rng(19);
  const auto poly = oracle::random_convex_polygon(rng, 6);
  const auto rule = cell_quadrature(poly, 8);
  CellBasis basis(poly, 3, rule);
  Eigen::Vector2d x(0.5 * (poly[0] + poly[2]));
  const double h = 1e-6;
  const Eigen::MatrixXd grads = basis.gradients(x);
  for (int d = 0; d < 2; ++d) {
    Eigen::Vector2d xp = x, xm = x;
    xp[d] += h;
    xm[d] -= h;
    const Eigen::VectorXd fd = (basis.values(xp) - basis.values(xm)) / (2 * h);
    CHECK((grads.col(d) - fd).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("face basis: orthonormality and projection") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int deg = 0; deg <= 3; ++deg) {
    const Eigen::Vector2d a(unif(rng), unif(rng));
    const Eigen::Vector2d b(a + Eigen::Vector2d(0.3 + unif(rng), unif(rng)));
    FaceBasis basis(a, b, deg);
    const auto rule = face_quadrature(a, b, 2 * deg + 2);
    const int dim = basis.dimension();
    REQUIRE(dim == face_space_dim(deg));
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(dim, dim);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Eigen::VectorXd v = basis.values(rule.points[q]);
      gram += rule.weights[q] * v * v.transpose();
    }
    CHECK((gram - Eigen::MatrixXd::Identity(dim, dim)).cwiseAbs().maxCoeff() <
          1e-12);

    Eigen::VectorXd coeffs(dim);
    for (int i = 0; i < dim; ++i) coeffs[i] = unif(rng) - 0.5;
    auto f = [&](const Eigen::Vector2d& x) {
      return coeffs.dot(basis.values(x));
    };
    const Eigen::VectorXd proj = l2_project_face(f, basis, rule);
    CHECK((proj - coeffs).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("degree-0 face projection of exp(s) is the segment mean") {
  // Horizontal unit-speed-free segment of length 2 centered at the origin:
  // the arclength coordinate s runs over [-1, 1], so the mean of e^s is
  // (e - 1/e)/2.
  const Eigen::Vector2d a(-1.0, 0.0), b(1.0, 0.0);
  FaceBasis basis(a, b, 0);
  const auto rule = face_quadrature(a, b, 10);
  auto f = [](const Eigen::Vector2d& x) { return std::exp(x.x()); };
  const Eigen::VectorXd proj = l2_project_face(f, basis, rule);
  const double value = proj.dot(basis.values(Eigen::Vector2d(0.25, 0.0)));
  CHECK(value ==
        doctest::Approx(0.5 * (std::exp(1.0) - std::exp(-1.0))).epsilon(1e-12));
}
