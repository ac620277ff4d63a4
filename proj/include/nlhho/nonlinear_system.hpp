// One backward-Euler step as a nonlinear algebraic system: residual,
// analytic Jacobian, static condensation and Newton iteration with
// adaptive time-step control.
#pragma once

#include <Eigen/Sparse>
#include <optional>
#include <string>

#include "nlhho/nonlinear_forms.hpp"

namespace nlhho {

/// Previous-state density sampled at the cell quadrature points (one vector
/// per cell). At the first step these are direct evaluations of the initial
/// datum; afterwards they come from the accepted discrete state.
struct PrevDensity {
  std::vector<Eigen::VectorXd> values;
};

PrevDensity density_from_function(const HhoSpace& space, const ScalarField& u);
/// e^{l} at the cell quadrature points of every cell.
PrevDensity density_from_state(const HhoSpace& space,
                               const Eigen::VectorXd& l);
/// Mass of a sampled density: sum of quadrature weights times values.
double density_mass(const HhoSpace& space, const PrevDensity& d);

/// Jacobian in unassembled per-cell form; cell blocks lead in each local
/// matrix. Face couplings are summed during condensation/assembly.
struct JacobianSystem {
  std::vector<Eigen::MatrixXd> local;  // [K]: nloc x nloc
};

/// Face-only Schur system plus the per-cell recovery maps
///   x_cell = rec_vec - rec_mat * x_faces(local).
struct CondensedSystem {
  Eigen::SparseMatrix<double> A;  // n_face_dofs square
  Eigen::VectorXd b;
  std::vector<Eigen::MatrixXd> rec_mat;
  std::vector<Eigen::VectorXd> rec_vec;
};

class StepAssembler {
 public:
  /// phi: interpolated potential coefficients (full hybrid vector).
  StepAssembler(const HhoSpace& space,
                const std::vector<LocalOperatorCache>& caches,
                Eigen::VectorXd phi,
                double overflow_guard = default_overflow_guard);

  const HhoSpace& space() const { return *m_space; }
  const std::vector<LocalOperatorCache>& caches() const { return *m_caches; }
  const Eigen::VectorXd& phi() const { return m_phi; }
  double overflow_guard() const { return m_guard; }

  /// R(l): cell rows carry the mass term (u(l)-u_prev)/dt tested against
  /// cell basis functions plus the T_D terms; face rows only T_D terms.
  /// Returns nothing if the overflow guard trips.
  std::optional<Eigen::VectorXd> residual(const Eigen::VectorXd& l,
                                          const PrevDensity& prev,
                                          double dt) const;

  /// Exact derivative of the residual with respect to l.
  std::optional<JacobianSystem> jacobian(const Eigen::VectorXd& l,
                                         double dt) const;

 private:
  const HhoSpace* m_space;
  const std::vector<LocalOperatorCache>* m_caches;
  Eigen::VectorXd m_phi;
  double m_guard;
};

/// Schur-complement elimination of the cell blocks. rhs is a full-length
/// right-hand side. Returns nothing if a cell block is singular.
std::optional<CondensedSystem> condense(const HhoSpace& space,
                                        const JacobianSystem& J,
                                        const Eigen::VectorXd& rhs);

/// Expands a face solution of the condensed system to a full vector.
Eigen::VectorXd expand(const HhoSpace& space, const CondensedSystem& cs,
                       const Eigen::VectorXd& xf);

/// Assembles the full sparse matrix (testing/reference path).
Eigen::SparseMatrix<double> full_matrix(const HhoSpace& space,
                                        const JacobianSystem& J);

struct NewtonConfig {
  double tol_abs = 1e-11;
  double tol_rel = 1e-11;   // stop at max(tol_abs, tol_rel*|R0|_inf)
  int max_iterations = 50;
  double overflow_guard = default_overflow_guard;
  double dt_halving = 0.5;
  double dt_doubling = 2.0;
  int dt_min_exponent = 30;  // dt_min = dt_init * 2^-30
};

struct NewtonResult {
  bool converged = false;
  int iterations = 0;
  int linear_solves = 0;
  double residual_norm = 0.0;
  std::string failure;  // empty on success
  Eigen::VectorXd l;
};

/// Reusable sparse LU of the condensed face system; the symbolic analysis
/// is done once per sparsity pattern.
class FaceSolver {
 public:
  std::optional<Eigen::VectorXd> solve(const Eigen::SparseMatrix<double>& A,
                                       const Eigen::VectorXd& b);

 private:
  Eigen::SparseLU<Eigen::SparseMatrix<double>> m_lu;
  bool m_analyzed = false;
  Eigen::Index m_rows = -1;
};

/// Full-step Newton iteration with static condensation. Failure (divergence,
/// overflow, singular blocks, iteration cap) is a normal outcome consumed by
/// adaptive_step.
NewtonResult newton_solve(const StepAssembler& assembler,
                          const Eigen::VectorXd& l_init,
                          const PrevDensity& prev, double dt,
                          const NewtonConfig& config, FaceSolver& solver);

/// Time-step controller state: proposed dt, never above dt_init.
struct TimeController {
  double dt_init = 0.0;
  double dt = 0.0;
};

struct StepOutcome {
  bool accepted = false;
  double dt_used = 0.0;
  int newton_iterations = 0;
  int linear_solves = 0;  // includes rejected attempts
  std::string failure;
  Eigen::VectorXd l;
};

/// Attempts one step at controller.dt, halving on Newton failure down to
/// dt_init*2^-dt_min_exponent; on success proposes doubled dt capped at
/// dt_init for the next step.
StepOutcome adaptive_step(const StepAssembler& assembler,
                          const Eigen::VectorXd& l_prev,
                          const PrevDensity& prev, TimeController& control,
                          const NewtonConfig& config, FaceSolver& solver);

}  // namespace nlhho
