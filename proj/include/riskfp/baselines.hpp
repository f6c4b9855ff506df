#pragma once

#include "riskfp/fixed_point.hpp"
#include "riskfp/types.hpp"

#include <optional>

namespace riskfp {

enum class BaselineMethod { OP1, OP2, NLS };

struct BaselineConfig {
  BaselineMethod method = BaselineMethod::OP1;
  int max_iterations = 1000;
  double grad_tol = 1e-8;
  std::optional<Weights> start;  ///< uniform when empty

  void validate(Index n) const;
};

/// Euclidean projection onto the unit simplex (sort-and-threshold).
Vector project_to_simplex(const Vector& v);

/// OP1: projected gradient descent with Armijo backtracking on
/// f(x) = ||D(x)||^2 = sum_i (x_i (Vx)_i - b_i x'Vx)^2 over the simplex.
/// Converged when ||x - P(x - grad f)||_inf <= grad_tol.
SolveReport solve_op1(const CovarianceMatrix& V, const Weights& b, const BaselineConfig& cfg);

/// OP2: damped Newton on g(y) = 1/2 y'Vy - sum_i b_i log y_i over y > 0; the
/// portfolio is y / 1'y. Converged when ||Vy - b/y|| <= grad_tol (1 + ||Vy||).
SolveReport solve_op2(const CovarianceMatrix& V, const Weights& b, const BaselineConfig& cfg);

/// NLS: Levenberg-Marquardt on F(x) = [RC(x)/1'RC(x) - b ; 1'x - 1] with the
/// analytic Jacobian. Entries are floored at 1e-12 after every step.
/// Converged when ||J'F||_inf <= grad_tol or ||F|| <= grad_tol.
SolveReport solve_nls(const CovarianceMatrix& V, const Weights& b, const BaselineConfig& cfg);

/// Dispatches on cfg.method.
SolveReport solve_baseline(const CovarianceMatrix& V, const Weights& b,
                           const BaselineConfig& cfg);

}  // namespace riskfp
