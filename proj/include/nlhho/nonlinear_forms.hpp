// Exponential-weighted local forms built on the cached operators.
#pragma once

#include <stdexcept>

#include "nlhho/local_ops.hpp"

namespace nlhho {

/// Threshold on exponents of e^(.): a larger value at any evaluation point
/// signals a diverged state rather than risking inf/NaN contamination.
inline constexpr double default_overflow_guard = 700.0;

/// Thrown by the scalar form evaluators when the guard trips; the Newton
/// layer reports failure instead (see nonlinear_system).
struct DivergedState : std::runtime_error {
  DivergedState() : std::runtime_error("exponential overflow guard tripped") {}
};

/// Linear stabilized bilinear form: w^T a_K v on local vectors.
double bilinear_aK(const LocalOperatorCache& cache, const Eigen::VectorXd& w,
                   const Eigen::VectorXd& v);

/// Consistent nonlinear term: integral over K of e^{l_K} Lambda G(w).G(v).
/// `l`, `w`, `v` are local hybrid vectors (only the cell block of l is used).
double nonlinear_CK(const LocalOperatorCache& cache, const Eigen::VectorXd& l,
                    const Eigen::VectorXd& w, const Eigen::VectorXd& v,
                    double guard = default_overflow_guard);

/// Nonlinear jump stabilization: eta_nl * sum over faces of
/// (Lambda_{K,sigma}/h_sigma) * integral of the mean of e^{Pi_sigma(l_K)}
/// and e^{l_sigma} times J(w) J(v).
double nonlinear_SK(const LocalOperatorCache& cache, const Eigen::VectorXd& l,
                    const Eigen::VectorXd& w, const Eigen::VectorXd& v,
                    double guard = default_overflow_guard);

/// Full local form: C_K + S_K + epsilon h_K^{k+2} a_K(w, v).
double local_TK(const LocalOperatorCache& cache, const Eigen::VectorXd& l,
                const Eigen::VectorXd& w, const Eigen::VectorXd& v,
                double guard = default_overflow_guard);

/// Global sum of local_TK over all cells; arguments are full coefficient
/// vectors over the hybrid space.
double global_TD(const std::vector<LocalOperatorCache>& caches,
                 const Eigen::VectorXd& l, const Eigen::VectorXd& w,
                 const Eigen::VectorXd& v,
                 double guard = default_overflow_guard);

}  // namespace nlhho
