#pragma once

#include "riskfp/poly.hpp"
#include "riskfp/risk_measure.hpp"
#include "riskfp/types.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace riskfp {

/// Which rule produced a step.
///  - Quartic: k taken from a negative interval of Q, no clamping needed.
///  - Cubic: Q has no usable real root; k only certifies ||D(x+kD)|| < ||D(x)||.
///  - Clamped: a quartic step shortened to keep the iterate in the simplex.
///  - Converged: D(x) is exactly zero, no step required.
enum class Branch { Quartic, Cubic, Clamped, Converged };

enum class Termination { Tolerance, MaxIter };

std::string_view to_string(Branch b) noexcept;
std::string_view to_string(Termination t) noexcept;

/// Fixed-point iteration settings.
struct FpConfig {
  double L = 0.9;     ///< contraction target, 0 < L < 1
  double tol = 1e-6;  ///< stop once ||D(x_n)||_2 <= tol (raw, not normalized)
  int maxit = 1000;
  std::optional<Weights> start;  ///< strictly interior; uniform 1/N when empty

  /// Relative overshoot past the smallest-|.| root of Q: k = alpha (1 + margin),
  /// capped at the midpoint of the negative interval of Q.
  double step_margin = 0.01;

  bool record_trace = false;

  /// Throws ContractViolation on an invalid setting for an n-asset problem.
  void validate(Index n) const;
};

/// One accepted update x_{n+1} = x_n + k_n D(x_n), recorded when tracing.
struct IterationState {
  Vector x;      ///< x_n
  Vector delta;  ///< D(x_n)
  double step_k = 0.0;
  Branch branch = Branch::Quartic;
  bool clamped = false;
  double delta_norm = 0.0;       ///< ||D(x_n)||
  double next_delta_norm = 0.0;  ///< ||D(x_{n+1})||
};

/// Outcome of any solver in the library (fixed point and baselines).
struct SolveReport {
  Weights solution;
  int iterations = 0;
  double final_delta_norm = 0.0;
  double accuracy = 0.0;
  Termination termination = Termination::MaxIter;
  int cubic_fallback_count = 0;
  int clamp_count = 0;
  /// No admissible step could be found; the run ended before maxit.
  bool stalled = false;
  /// Per-iteration objective: ||D|| for the fixed point, the minimized
  /// objective for the baselines. Entry 0 is the starting value.
  std::vector<double> objective_history{};
  std::vector<IterationState> trace{};

  bool converged() const noexcept { return termination == Termination::Tolerance; }
};

struct StepVectors {
  Vector d1, d2, d3;
};

/// Q(k) = ||D(x + kD)||^2 - L^2 ||D||^2 (degree 4) and C(k), where
/// k C(k) = ||D(x + kD)||^2 - ||D||^2 (degree 3).
struct StepPolynomials {
  Polynomial quartic;
  Polynomial cubic;
};

struct StepChoice {
  double k = 0.0;
  Branch branch = Branch::Converged;
};

/// D(x) = diag(x) V x - (x'Vx) b. Defined for any real x, not only simplex points.
Vector delta_map(const CovarianceMatrix& V, const Weights& b, const Vector& x);

/// D(x) = RC(x) - (1'RC(x)) b for an arbitrary contribution provider.
Vector delta_map(const ContributionProvider& rc, const Weights& b, const Vector& x);

/// D1 = diag(x) V D - (x'V D) b, D2 = diag(D) V x - (D'V x) b, D3 = D(D), so that
/// D(x + kD) = D + k (D1 + D2) + k^2 D3 exactly.
StepVectors step_vectors(const CovarianceMatrix& V, const Weights& b, const Vector& x,
                         const Vector& delta);

StepPolynomials build_step_polynomials(const Vector& delta, const StepVectors& sv, double L);

/// Picks k from the step polynomials.
///
/// When Q has real roots, let alpha be the root nearest zero on a side (ties go
/// to the negative side) and beta the next root beyond it on the same side. The
/// step is k = alpha (1 + margin), capped at alpha + (beta - alpha) / 2, and
/// must satisfy Q(k) < 0. Otherwise the cubic rule takes half of the root of C
/// nearest zero on a side where k C(k) < 0 near the origin. Returns
/// Branch::Converged (k = 0) when D is zero, and a Cubic choice with k = 0 when
/// no admissible step exists.
StepChoice select_step(const StepPolynomials& polys, double margin = 0.01);

/// Largest |k'| <= |k| (same sign) keeping x + k' D inside the simplex.
double clamp_step(const Vector& x, const Vector& delta, double k);

/// Fixed-point iteration for the standard-deviation risk budget.
/// Throws InvalidBudgetError unless b is strictly interior.
SolveReport solve(const CovarianceMatrix& V, const Weights& b, const FpConfig& cfg = {});

/// Same iteration for a generic contribution provider; k is found by a
/// doubling/halving search along +-D instead of the step polynomials.
/// `accuracy` in the report uses the provider's normalized contributions.
SolveReport solve(const ContributionProvider& rc, const Weights& b, const FpConfig& cfg);

}  // namespace riskfp
