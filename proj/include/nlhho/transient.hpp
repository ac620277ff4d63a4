// Problem definition, discrete thermal equilibrium, time loop and structure
// diagnostics (mass, entropy, dissipation, distance to equilibrium).
#pragma once

#include <functional>
#include <string>

#include "nlhho/nonlinear_system.hpp"

namespace nlhho {

struct ProblemSpec {
  TensorField lambda;
  ScalarField phi;
  ScalarField u_init;
  HhoParams params;
  double dt_init = 0.0;
  double t_final = 0.0;
  /// Replace the initial datum by the discrete equilibrium density computed
  /// from its mass (stationarity runs).
  bool start_from_equilibrium = false;
};

/// Cell blocks carry the degree-(k+1) projection of phi, face blocks the
/// degree-k projection.
DiscreteVector interpolate_potential(const HhoSpace& space,
                                     const ScalarField& phi);

struct EquilibriumState {
  double mass = 0.0;     // M = integral of the initial datum
  double rho = 0.0;      // M / integral of e^{-phi_M}
  double log_rho = 0.0;
  DiscreteVector l_inf;  // log(rho) - phi per block
  PrevDensity density;   // e^{l_inf} at cell quadrature points
};

/// Builds the discrete equilibrium from the interpolated potential and the
/// initial datum's mass. Fails if the mass is not positive.
EquilibriumState equilibrium(const HhoSpace& space,
                             const DiscreteVector& phi_D,
                             const ScalarField& u_init);

/// Relative entropy E = integral of u_inf * Phi1(u/u_inf) with
/// Phi1(s) = s log s - s + 1 (Phi1(0) = 1).
double entropy(const HhoSpace& space, const Eigen::VectorXd& l,
               const EquilibriumState& eq);
/// Entropy of a sampled (not exponential-represented) density, used for the
/// initial datum.
double entropy_of_density(const HhoSpace& space, const PrevDensity& u,
                          const EquilibriumState& eq);

/// Dissipation D = T_D(l, w, w) with w = l + phi_D - log(rho) 1_D.
double dissipation(const std::vector<LocalOperatorCache>& caches,
                   const HhoSpace& space, const Eigen::VectorXd& l,
                   const DiscreteVector& phi_D, const EquilibriumState& eq,
                   const DiscreteVector& ones);

/// Integral over the domain of |u_M - ref| by cell quadrature; ref is
/// evaluated per cell at quadrature points.
double l1_distance(const HhoSpace& space, const Eigen::VectorXd& l,
                   const PrevDensity& ref);
double l1_distance_to(const HhoSpace& space, const Eigen::VectorXd& l,
                      const ScalarField& ref);

struct StepRecord {
  int step = 0;
  double time = 0.0;
  double dt = 0.0;
  double mass = 0.0;
  double entropy = 0.0;
  double dissipation = 0.0;
  double l1_dist = 0.0;
  int newton_iters = 0;
  int linear_solves = 0;
};

using StepObserver =
    std::function<void(const StepRecord&, const Eigen::VectorXd& l)>;

struct RunResult {
  std::vector<StepRecord> history;  // row 0 describes the initial datum
  Eigen::VectorXd l;                // final state
  bool completed = false;
  std::string error;
  int total_newton_iterations = 0;
  int total_linear_solves = 0;
  double seconds = 0.0;
};

/// Backward-Euler time loop with adaptive step control; diagnostics recorded
/// at every accepted step. The observer (optional) sees each accepted state.
RunResult run(const HhoSpace& space,
              const std::vector<LocalOperatorCache>& caches,
              const ProblemSpec& problem, const NewtonConfig& newton,
              const StepObserver& observer = {});

}  // namespace nlhho
