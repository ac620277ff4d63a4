// Reference cases and experiment drivers: closed-form solution checks,
// small study smoke runs and output-file formats.
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "nlhho/experiments.hpp"
#include "nlhho/mesh_gen.hpp"

using namespace nlhho;

TEST_CASE("closed-form case satisfies the PDE") {
  std::mt19937 rng(321);
  std::uniform_real_distribution<double> unif(0.05, 0.95);
  for (double lx : {1.0, 1e-2}) {
    ExactSolutionCase sol;
    sol.lx = lx;
    const double h = 1e-5;
    for (int trial = 0; trial < 30; ++trial) {
      const double t = 0.05 + 0.4 * unif(rng);
      const Eigen::Vector2d x(unif(rng), unif(rng));

      // Time derivative by central difference.
      const double ut =
          (sol.value(t + h, x) - sol.value(t - h, x)) / (2 * h);
      // Spatial operator: with phi = -x and Lambda = diag(lx, 1) the flux is
      // (lx (du/dx - u), du/dy); its divergence via central differences of
      // the analytic gradient and value.
      auto flux_x = [&](double xx) {
        const Eigen::Vector2d p(xx, x.y());
        return lx * (sol.gradient(t, p).x() - sol.value(t, p));
      };
      auto flux_y = [&](double yy) {
        const Eigen::Vector2d p(x.x(), yy);
        return sol.gradient(t, p).y();
      };
      const double div = (flux_x(x.x() + h) - flux_x(x.x() - h)) / (2 * h) +
                         (flux_y(x.y() + h) - flux_y(x.y() - h)) / (2 * h);
      const double scale = std::max(1.0, std::abs(sol.value(t, x)));
      CHECK(std::abs(ut - div) < 2e-5 * scale);

      // Gradient consistency with the value.
      const Eigen::Vector2d gfd(
          (sol.value(t, {x.x() + h, x.y()}) - sol.value(t, {x.x() - h, x.y()})) /
              (2 * h),
          (sol.value(t, {x.x(), x.y() + h}) - sol.value(t, {x.x(), x.y() - h})) /
              (2 * h));
      CHECK((sol.gradient(t, x) - gfd).norm() < 1e-6 * scale);
    }
  }
}

TEST_CASE("closed-form case: boundary zeros, positivity, long-time limit") {
  ExactSolutionCase sol;
  for (double y : {0.0, 0.3, 0.8, 1.0}) {
    CHECK(std::abs(sol.value(0.0, {1.0, y})) < 1e-13);
    // The datum stays nonnegative on the closed square.
    for (double x = 0.0; x <= 1.0001; x += 0.05)
      CHECK(sol.value(0.0, {x, y}) > -1e-13);
  }
  // As t grows, the transient part decays to the steady profile.
  const Eigen::Vector2d p(0.37, 0.62);
  CHECK(sol.value(50.0, p) ==
        doctest::Approx(sol.equilibrium_value(p)).epsilon(1e-12));
  // No y-dependence anywhere.
  CHECK(sol.value(0.2, {0.4, 0.1}) ==
        doctest::Approx(sol.value(0.2, {0.4, 0.9})).epsilon(1e-14));
}

TEST_CASE("positivity case data") {
  const ProblemSpec p = positivity_problem(1e-5, 5e-4);
  CHECK(p.dt_init == doctest::Approx(1e-5));
  CHECK(p.t_final == doctest::Approx(5e-4));
  // Contrast 1e-3 inside the ball, 1 outside.
  CHECK(p.u_init(Eigen::Vector2d(0.5, 0.5)) == doctest::Approx(1e-3));
  CHECK(p.u_init(Eigen::Vector2d(0.9, 0.9)) == doctest::Approx(1.0));
  CHECK(p.u_init(Eigen::Vector2d(0.5, 0.65)) == doctest::Approx(1e-3));
  CHECK(p.u_init(Eigen::Vector2d(0.5, 0.71)) == doctest::Approx(1.0));
  // The tensor is symmetric positive definite.
  const Eigen::Matrix2d m = p.lambda(Eigen::Vector2d(0.3, 0.7));
  CHECK(m(0, 1) == doctest::Approx(m(1, 0)));
  CHECK(m.determinant() > 0.0);
  CHECK(m.trace() > 0.0);
}

TEST_CASE("two-level convergence smoke run shows decreasing errors") {
  const ErrorReport report = convergence_study(0, 2);
  REQUIRE(report.rows.size() == 2);
  CHECK(report.rows[0].n == 4);
  CHECK(report.rows[1].n == 8);
  CHECK(report.rows[0].dt == doctest::Approx(0.05 / 4.0));
  CHECK(report.rows[1].dt == doctest::Approx(0.05 / 16.0));
  CHECK(report.rows[1].err_l2 < report.rows[0].err_l2);
  CHECK(report.rows[1].err_grad < report.rows[0].err_grad);
  CHECK(report.rows[1].err_interp < report.rows[0].err_interp);
  REQUIRE(report.orders_l2.size() == 1);
  CHECK(report.orders_l2[0] > 0.5);
  // The interpolation floor sits at or below the scheme error, up to a
  // modest constant.
  for (const auto& row : report.rows)
    CHECK(row.err_interp < 10.0 * row.err_l2);
}

TEST_CASE("positivity smoke run keeps all density samples positive") {
  const Mesh mesh = gen_hexdominant(6);
  const PositivityReport rep = positivity_study(mesh, 0, 1e-5, 5e-5);
  REQUIRE(rep.completed);
  CHECK(rep.steps >= 5);
  CHECK(rep.mincells > 0.0);
  CHECK(rep.minfaces > 0.0);
  CHECK(rep.mincellQN > 0.0);
  CHECK(rep.minfaceQN > 0.0);
  CHECK(rep.mincells < 1.0);
}

TEST_CASE("decay study fits the expected rate on a coarse mesh") {
  // Tiny horizon smoke test: fitted rate should be positive and the report
  // well formed (the full-horizon studies live in the acceptance suite).
  const Mesh mesh = gen_kershaw(8, 0.3);
  const LongtimeReport rep = longtime_study(mesh, 0, 1e-2, 0.1, 10.0, 1.0, 9.0);
  REQUIRE(rep.completed);
  CHECK(rep.alpha == doctest::Approx(1e-2 * (0.25 + M_PI * M_PI)));
  CHECK(rep.fitted_rate > 0.0);
  CHECK(rep.decay.size() >= 50);
  CHECK(rep.fit_t0 == doctest::Approx(1.0));
  CHECK(rep.fit_t1 == doctest::Approx(9.0));
}

TEST_CASE("csv and plot writers produce well-formed deterministic files") {
  std::vector<StepRecord> history(3);
  for (int i = 0; i < 3; ++i) {
    history[i].step = i;
    history[i].time = 0.1 * i;
    history[i].dt = i == 0 ? 0.0 : 0.1;
    history[i].mass = 1.0;
    history[i].entropy = 1.0 / (1 + i);
    history[i].dissipation = 0.5 * i;
    history[i].l1_dist = 0.25 * i;
    history[i].newton_iters = i;
    history[i].linear_solves = i;
  }
  const std::string path = "test_history_out.csv";
  write_history_csv(path, history);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header ==
        "time,dt,mass,entropy,dissipation,l1_dist,newton_iters,linear_solves");
  int rows = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  in.close();
  CHECK(rows == 3);

  // Writing the same data twice gives identical bytes.
  std::ostringstream first, second;
  {
    std::ifstream a(path);
    first << a.rdbuf();
  }
  write_history_csv(path, history);
  {
    std::ifstream b(path);
    second << b.rdbuf();
  }
  CHECK(first.str() == second.str());
  std::remove(path.c_str());

  const std::string plot = "test_plot_out.dat";
  write_plot_data(plot, {{0.0, 1.0}, {1.0, 0.5}});
  std::ifstream pin(plot);
  REQUIRE(pin.good());
  std::getline(pin, line);
  CHECK(line == "0 1");
  pin.close();
  std::remove(plot.c_str());
}

TEST_CASE("error table writer emits order columns") {
  ErrorReport rep;
  rep.k = 0;
  rep.rows.resize(2);
  rep.rows[0] = {4, 0.35, 0.0125, 0.1, 0.2, 0.05, 8, 20, 1.0};
  rep.rows[1] = {8, 0.17, 0.003125, 0.05, 0.1, 0.025, 32, 80, 4.0};
  rep.orders_l2 = {1.0};
  rep.orders_grad = {1.0};
  rep.orders_interp = {1.0};
  const std::string path = "test_errors_out.csv";
  write_errors_csv(path, rep);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header ==
        "n,h,dt,err_l2,order_l2,err_grad,order_grad,err_interp,order_interp,"
        "steps,linear_solves,seconds");
  std::string row0, row1;
  std::getline(in, row0);
  std::getline(in, row1);
  // First row has empty order fields; the second carries the fitted orders.
  CHECK(row0.find(",,") != std::string::npos);
  CHECK(row1.find(",,") == std::string::npos);
  in.close();
  std::remove(path.c_str());
}
