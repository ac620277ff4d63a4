// Reference test cases and the three experiment drivers: convergence study
// against a closed-form solution, long-time decay to equilibrium, and
// positivity statistics on a discontinuous datum.
#pragma once

#include <string>
#include <vector>

#include "nlhho/mesh.hpp"
#include "nlhho/transient.hpp"

namespace nlhho {

/// Closed-form transient solution of
///   dt u - div(Lambda (grad u + u grad phi)) = 0
/// on the unit square with phi = -x, Lambda = diag(lx, 1) and homogeneous
/// flux boundary conditions. The datum vanishes on the edge x = 1.
struct ExactSolutionCase {
  double lx = 1.0;
  double c1 = 0.1;

  double alpha() const { return lx * (0.25 + M_PI * M_PI); }
  double value(double t, const Eigen::Vector2d& x) const;
  Eigen::Vector2d gradient(double t, const Eigen::Vector2d& x) const;
  /// The steady profile 2 c1 pi e^{x - 1/2}.
  double equilibrium_value(const Eigen::Vector2d& x) const;

  ProblemSpec problem(double dt, double t_final) const;
};

/// Data of the positivity experiment: quadratic well potential, mildly
/// anisotropic tensor, datum 1e-3 inside the ball B((0.5,0.5),0.2) and 1
/// outside.
ProblemSpec positivity_problem(double dt, double t_final);

struct ConvergenceRow {
  int n = 0;           // mesh resolution parameter
  double h = 0.0;
  double dt = 0.0;
  double err_l2 = 0.0;      // relative space-time L2 error of the density
  double err_grad = 0.0;    // relative error of the reconstructed gradient
  double err_interp = 0.0;  // interpolation-only floor
  int steps = 0;
  long linear_solves = 0;
  double seconds = 0.0;
};

struct ErrorReport {
  int k = 0;
  std::vector<ConvergenceRow> rows;
  /// log2(e_i / e_{i+1}) between consecutive rows for each error column.
  std::vector<double> orders_l2, orders_grad, orders_interp;
};

/// Runs the exact-solution case on gen_triangular(base_n * 2^i) for
/// i = 0..levels-1 over [0, 0.1], with the step schedule
/// dt_i = (0.05 / 2^{k+2}) / 2^{i(k+2)}.
ErrorReport convergence_study(int k, int levels, int base_n = 4,
                              double lx = 1.0, double c1 = 0.1,
                              const NewtonConfig& newton = {});

struct LongtimeReport {
  int k = 0;
  double alpha = 0.0;        // continuous decay rate of the case
  double fitted_rate = 0.0;  // from log-linear fit of the L1 distance
  double fit_t0 = 0.0, fit_t1 = 0.0;
  std::vector<std::pair<double, double>> decay;  // (t, L1 distance)
  bool completed = false;
};

/// Runs the exact-solution case with small lx (slow decay) and fits the
/// exponential decay rate of the distance to equilibrium over
/// [fit_t0, fit_t1].
LongtimeReport longtime_study(const Mesh& mesh, int k, double lx = 1e-2,
                              double dt = 0.1, double t_final = 150.0,
                              double fit_t0 = -1.0, double fit_t1 = -1.0,
                              const NewtonConfig& newton = {});

struct PositivityReport {
  int k = 0;
  double mincells = 0.0;    // min over steps/cells of cell-mean density
  double minfaces = 0.0;    // same with face-mean of the skeletal density
  double mincellQN = 0.0;   // min density at cell quadrature nodes
  double minfaceQN = 0.0;   // min density at face quadrature nodes
  long linear_solves = 0;
  int steps = 0;
  double seconds = 0.0;
  bool completed = false;
};

PositivityReport positivity_study(const Mesh& mesh, int k, double dt = 1e-5,
                                  double t_final = 5e-4,
                                  const NewtonConfig& newton = {});

// CSV / plot-data writers (two-column plot files: x <space> y).
void write_history_csv(const std::string& path,
                       const std::vector<StepRecord>& history);
void write_errors_csv(const std::string& path, const ErrorReport& report);
void write_positivity_csv(const std::string& path,
                          const std::vector<PositivityReport>& rows);
void write_plot_data(const std::string& path,
                     const std::vector<std::pair<double, double>>& xy);

}  // namespace nlhho
