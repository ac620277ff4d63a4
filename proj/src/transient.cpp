#include "nlhho/transient.hpp"

#include <chrono>
#include <cmath>

namespace nlhho {

DiscreteVector interpolate_potential(const HhoSpace& space,
                                     const ScalarField& phi) {
  return interpolate(space, phi);
}

EquilibriumState equilibrium(const HhoSpace& space,
                             const DiscreteVector& phi_D,
                             const ScalarField& u_init) {
  EquilibriumState eq{0.0, 0.0, 0.0, DiscreteVector(space), PrevDensity{}};
  const Mesh& mesh = space.mesh();

  eq.mass = density_mass(space, density_from_function(space, u_init));
  if (!(eq.mass > 0.0))
    throw std::runtime_error("equilibrium: initial datum has non-positive "
                             "mass");

  // integral of e^{-phi_M} with the interpolated potential
  double z = 0.0;
  for (int K = 0; K < mesh.n_cells(); ++K) {
    const auto& rule = space.cell_rule(K);
    const auto& vals = space.cell_values(K);
    const Eigen::VectorXd phiK = phi_D.cell_block(K);
    for (std::size_t q = 0; q < rule.size(); ++q)
      z += rule.weights[q] *
           std::exp(-vals.col(static_cast<int>(q)).dot(phiK));
  }
  eq.rho = eq.mass / z;
  eq.log_rho = std::log(eq.rho);

  const DiscreteVector ones = interpolate(space, [](const Eigen::Vector2d&) {
    return 1.0;
  });
  eq.l_inf.coeffs = eq.log_rho * ones.coeffs - phi_D.coeffs;
  eq.density = density_from_state(space, eq.l_inf.coeffs);
  return eq;
}

double entropy(const HhoSpace& space, const Eigen::VectorXd& l,
               const EquilibriumState& eq) {
  double E = 0.0;
  const int cbs = space.cell_block_dim();
  for (int K = 0; K < space.mesh().n_cells(); ++K) {
    const auto& rule = space.cell_rule(K);
    const auto& vals = space.cell_values(K);
    const Eigen::VectorXd lK = l.segment(space.cell_offset(K), cbs);
    const Eigen::VectorXd linfK =
        eq.l_inf.coeffs.segment(space.cell_offset(K), cbs);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const int qi = static_cast<int>(q);
      const double linf = vals.col(qi).dot(linfK);
      const double d = vals.col(qi).dot(lK) - linf;  // log(u/u_inf)
      // u_inf * Phi1(u/u_inf) = u_inf * (e^d (d - 1) + 1)
      E += rule.weights[q] * std::exp(linf) * (std::exp(d) * (d - 1.0) + 1.0);
    }
  }
  return E;
}

double entropy_of_density(const HhoSpace& space, const PrevDensity& u,
                          const EquilibriumState& eq) {
  double E = 0.0;
  for (int K = 0; K < space.mesh().n_cells(); ++K) {
    const auto& rule = space.cell_rule(K);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const int qi = static_cast<int>(q);
      const double uinf = eq.density.values[K](qi);
      const double s = u.values[K](qi) / uinf;
      const double phi1 = s > 0.0 ? s * std::log(s) - s + 1.0 : 1.0;
      E += rule.weights[q] * uinf * phi1;
    }
  }
  return E;
}

double dissipation(const std::vector<LocalOperatorCache>& caches,
                   const HhoSpace&, const Eigen::VectorXd& l,
                   const DiscreteVector& phi_D, const EquilibriumState& eq,
                   const DiscreteVector& ones) {
  const Eigen::VectorXd w =
      l + phi_D.coeffs - eq.log_rho * ones.coeffs;
  return global_TD(caches, l, w, w);
}

double l1_distance(const HhoSpace& space, const Eigen::VectorXd& l,
                   const PrevDensity& ref) {
  double s = 0.0;
  const int cbs = space.cell_block_dim();
  for (int K = 0; K < space.mesh().n_cells(); ++K) {
    const auto& rule = space.cell_rule(K);
    const auto& vals = space.cell_values(K);
    const Eigen::VectorXd lK = l.segment(space.cell_offset(K), cbs);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const int qi = static_cast<int>(q);
      s += rule.weights[q] *
           std::abs(std::exp(vals.col(qi).dot(lK)) - ref.values[K](qi));
    }
  }
  return s;
}

double l1_distance_to(const HhoSpace& space, const Eigen::VectorXd& l,
                      const ScalarField& ref) {
  return l1_distance(space, l, density_from_function(space, ref));
}

RunResult run(const HhoSpace& space,
              const std::vector<LocalOperatorCache>& caches,
              const ProblemSpec& problem, const NewtonConfig& newton,
              const StepObserver& observer) {
  const auto t_start = std::chrono::steady_clock::now();
  RunResult result;

  const DiscreteVector phi_D = interpolate_potential(space, problem.phi);
  const DiscreteVector ones =
      interpolate(space, [](const Eigen::Vector2d&) { return 1.0; });
  const EquilibriumState eq = equilibrium(space, phi_D, problem.u_init);

  StepAssembler assembler(space, caches, phi_D.coeffs, newton.overflow_guard);
  FaceSolver solver;

  // Initial state: sampled datum plus a finite logarithmic guess. The guess
  // is the log of the local mean density, constant on every cell and face:
  // a polynomial interpolate of log u_init oscillates violently wherever the
  // datum jumps or vanishes and strands the first Newton solve outside its
  // attraction basin at any time step, while the piecewise-constant guess is
  // bounded by the datum's range and converges at the nominal step.
  PrevDensity prev;
  Eigen::VectorXd l;
  if (problem.start_from_equilibrium) {
    prev = eq.density;
    l = eq.l_inf.coeffs;
  } else {
    prev = density_from_function(space, problem.u_init);
    double u_max = 0.0;
    for (const auto& v : prev.values)
      u_max = std::max(u_max, v.size() ? v.maxCoeff() : 0.0);
    const double floor = 1e-14 * u_max;
    const Mesh& mesh = space.mesh();
    l = Eigen::VectorXd::Zero(space.n_dofs());
    const int cbs = space.cell_block_dim();
    const int fbs = space.face_block_dim();
    for (int K = 0; K < mesh.n_cells(); ++K) {
      const auto& rule = space.cell_rule(K);
      double mean = 0.0;
      for (std::size_t q = 0; q < rule.size(); ++q)
        mean += rule.weights[q] * prev.values[K](static_cast<int>(q));
      const double c = std::log(std::max(mean / mesh.cell_area[K], floor));
      l.segment(space.cell_offset(K), cbs) = l2_project_cell(
          [c](const Eigen::Vector2d&) { return c; }, space.cell_basis(K),
          rule);
    }
    for (int f = 0; f < mesh.n_faces(); ++f) {
      const auto& rule = space.face_rule(f);
      double mean = 0.0;
      for (std::size_t q = 0; q < rule.size(); ++q)
        mean += rule.weights[q] * problem.u_init(rule.points[q]);
      const double c = std::log(std::max(mean / mesh.face_length[f], floor));
      l.segment(space.face_offset(f), fbs) = l2_project_face(
          [c](const Eigen::Vector2d&) { return c; }, space.face_basis(f),
          rule);
    }
  }

  StepRecord rec0;
  rec0.mass = density_mass(space, prev);
  rec0.entropy = entropy_of_density(space, prev, eq);
  rec0.l1_dist = [&] {
    double s = 0.0;
    for (int K = 0; K < space.mesh().n_cells(); ++K) {
      const auto& rule = space.cell_rule(K);
      for (std::size_t q = 0; q < rule.size(); ++q)
        s += rule.weights[q] * std::abs(prev.values[K](static_cast<int>(q)) -
                                        eq.density.values[K](static_cast<int>(q)));
    }
    return s;
  }();
  result.history.push_back(rec0);

  TimeController control{.dt_init = problem.dt_init, .dt = problem.dt_init};
  double t = 0.0;
  int step = 0;

  while (t < problem.t_final - 1e-12 * problem.t_final) {
    // Do not overshoot the final time.
    control.dt = std::min(control.dt, problem.t_final - t);

    const StepOutcome out =
        adaptive_step(assembler, l, prev, control, newton, solver);
    result.total_newton_iterations += out.newton_iterations;
    result.total_linear_solves += out.linear_solves;
    if (!out.accepted) {
      result.error = "aborted at t = " + std::to_string(t) + ": " +
                     out.failure;
      result.l = std::move(l);
      const auto t_end = std::chrono::steady_clock::now();
      result.seconds = std::chrono::duration<double>(t_end - t_start).count();
      return result;
    }

    l = out.l;
    t += out.dt_used;
    ++step;
    prev = density_from_state(space, l);

    StepRecord rec;
    rec.step = step;
    rec.time = t;
    rec.dt = out.dt_used;
    rec.mass = density_mass(space, prev);
    rec.entropy = entropy(space, l, eq);
    rec.dissipation = dissipation(caches, space, l, phi_D, eq, ones);
    rec.l1_dist = l1_distance(space, l, eq.density);
    rec.newton_iters = out.newton_iterations;
    rec.linear_solves = out.linear_solves;
    result.history.push_back(rec);
    if (observer) observer(rec, l);
  }

  result.completed = true;
  result.l = std::move(l);
  const auto t_end = std::chrono::steady_clock::now();
  result.seconds = std::chrono::duration<double>(t_end - t_start).count();
  return result;
}

}  // namespace nlhho
