#include "riskfp/baselines.hpp"

#include "riskfp/risk_measure.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

namespace riskfp {

namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 60;
constexpr double kNlsFloor = 1e-12;

Vector starting_point(const BaselineConfig& cfg, Index n) {
  return cfg.start ? cfg.start->values() : Weights::uniform(n).values();
}

void check_inputs(const CovarianceMatrix& V, const Weights& b, const BaselineConfig& cfg) {
  if (b.size() != V.dim()) throw ContractViolation("baseline: budget dimension mismatch");
  if (!b.is_interior()) throw InvalidBudgetError("baseline: budget must be strictly positive");
  cfg.validate(V.dim());
}

SolveReport finish(const CovarianceMatrix& V, const Weights& b, Vector x, int iterations,
                   bool converged, bool stalled, std::vector<double> history) {
  x = x.cwiseMax(0.0);
  x /= x.sum();
  SolveReport r{.solution = Weights::simplex(x)};
  r.iterations = iterations;
  r.final_delta_norm = delta_map(V, b, x).norm();
  r.accuracy = accuracy(V, x, b);
  r.termination = converged ? Termination::Tolerance : Termination::MaxIter;
  r.stalled = stalled;
  r.objective_history = std::move(history);
  return r;
}

// f(x) = ||D(x)||^2 and its gradient 2 J' D, J = diag(Vx) + diag(x) V - 2 b (Vx)'.
double op1_objective(const Matrix& v, const Vector& b, const Vector& x, Vector* grad) {
  const Vector vx = v * x;
  const Vector d = x.cwiseProduct(vx) - x.dot(vx) * b;
  if (grad) {
    *grad = 2.0 * (vx.cwiseProduct(d) + v * x.cwiseProduct(d) - 2.0 * b.dot(d) * vx);
  }
  return d.squaredNorm();
}

}  // namespace

void BaselineConfig::validate(Index n) const {
  if (max_iterations < 1) throw ContractViolation("BaselineConfig: max_iterations < 1");
  if (!(grad_tol > 0.0)) throw ContractViolation("BaselineConfig: grad_tol must be positive");
  if (start && start->size() != n) throw ContractViolation("BaselineConfig: start dimension");
}

Vector project_to_simplex(const Vector& v) {
  std::vector<double> u(v.data(), v.data() + v.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumsum += u[j];
    const double t = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (u[j] - t > 0.0) theta = t;
  }
  return (v.array() - theta).cwiseMax(0.0).matrix();
}

SolveReport solve_op1(const CovarianceMatrix& V, const Weights& b, const BaselineConfig& cfg) {
  check_inputs(V, b, cfg);
  const Matrix& v = V.matrix();
  const Vector& bv = b.values();

  Vector x = project_to_simplex(starting_point(cfg, V.dim()));
  Vector grad;
  double f = op1_objective(v, bv, x, &grad);
  std::vector<double> history{f};
  double step = 1.0;
  bool converged = false;
  bool stalled = false;
  int it = 0;
  for (; it < cfg.max_iterations; ++it) {
    const Vector pg = x - project_to_simplex(x - grad);
    if (pg.lpNorm<Eigen::Infinity>() <= cfg.grad_tol) {
      converged = true;
      break;
    }
    step *= 2.0;
    bool accepted = false;
    for (int h = 0; h < kMaxBacktracks; ++h, step *= 0.5) {
      const Vector trial = project_to_simplex(x - step * grad);
      const double f_trial = op1_objective(v, bv, trial, nullptr);
      if (f_trial <= f + kArmijo * grad.dot(trial - x)) {
        x = trial;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      stalled = true;
      break;
    }
    f = op1_objective(v, bv, x, &grad);
    history.push_back(f);
  }
  return finish(V, b, x, it, converged, stalled, std::move(history));
}

SolveReport solve_op2(const CovarianceMatrix& V, const Weights& b, const BaselineConfig& cfg) {
  check_inputs(V, b, cfg);
  const Matrix& v = V.matrix();
  const Vector& bv = b.values();

  auto objective = [&](const Vector& y) {
    return 0.5 * y.dot(v * y) - (bv.array() * y.array().log()).sum();
  };

  // Scale the start so that y'Vy = 1 = 1'b, which the optimum satisfies.
  Vector y = starting_point(cfg, V.dim());
  y /= std::sqrt(y.dot(v * y));
  double g_val = objective(y);
  std::vector<double> history{g_val};
  bool converged = false;
  bool stalled = false;
  int it = 0;
  for (; it < cfg.max_iterations; ++it) {
    const Vector vy = v * y;
    const Vector grad = vy - bv.cwiseQuotient(y);
    if (grad.norm() <= cfg.grad_tol * (1.0 + vy.norm())) {
      converged = true;
      break;
    }
    Matrix hess = v;
    hess.diagonal() += bv.cwiseQuotient(y.cwiseProduct(y));
    Eigen::LLT<Matrix> llt(hess);
    Vector dir = llt.info() == Eigen::Success ? Vector(llt.solve(-grad)) : Vector(-grad);

    double t = 1.0;
    int h = 0;
    while (((y + t * dir).array() <= 0.0).any() && h < kMaxBacktracks) {
      t *= 0.5;
      ++h;
    }
    const double slope = grad.dot(dir);
    Vector trial = y + t * dir;
    double g_trial = objective(trial);
    while (!(g_trial <= g_val + kArmijo * t * slope) && h < kMaxBacktracks) {
      t *= 0.5;
      ++h;
      trial = y + t * dir;
      g_trial = objective(trial);
    }
    if (!(g_trial <= g_val) || (trial.array() <= 0.0).any()) {
      stalled = true;
      break;
    }
    y = std::move(trial);
    g_val = g_trial;
    history.push_back(g_val);
  }
  return finish(V, b, y, it, converged, stalled, std::move(history));
}

SolveReport solve_nls(const CovarianceMatrix& V, const Weights& b, const BaselineConfig& cfg) {
  check_inputs(V, b, cfg);
  const Matrix& v = V.matrix();
  const Vector& bv = b.values();
  const Index n = V.dim();

  auto residual = [&](const Vector& x) {
    Vector f(n + 1);
    const Vector vx = v * x;
    f.head(n) = x.cwiseProduct(vx) / x.dot(vx) - bv;
    f(n) = x.sum() - 1.0;
    return f;
  };
  auto jacobian = [&](const Vector& x) {
    Matrix jac(n + 1, n);
    const Vector vx = v * x;
    const double s = x.dot(vx);
    const Vector rc = x.cwiseProduct(vx);
    jac.topRows(n) = x.asDiagonal() * v;
    jac.topRows(n).diagonal() += vx;
    jac.topRows(n) /= s;
    jac.topRows(n).noalias() -= (2.0 / (s * s)) * rc * vx.transpose();
    jac.row(n).setOnes();
    return jac;
  };

  Vector x = starting_point(cfg, n).cwiseMax(kNlsFloor);
  Vector f = residual(x);
  double fnorm = f.norm();
  std::vector<double> history{fnorm};
  Matrix jac = jacobian(x);
  Matrix jtj = jac.transpose() * jac;
  double mu = 1e-3 * jtj.diagonal().maxCoeff();
  bool converged = false;
  bool stalled = false;
  int it = 0;
  for (; it < cfg.max_iterations; ++it) {
    const Vector jtf = jac.transpose() * f;
    if (jtf.lpNorm<Eigen::Infinity>() <= cfg.grad_tol || fnorm <= cfg.grad_tol) {
      converged = true;
      break;
    }
    const double dmax = jtj.diagonal().maxCoeff();
    Matrix a = jtj;
    a.diagonal() += mu * jtj.diagonal().cwiseMax(1e-12 * dmax);
    Eigen::LDLT<Matrix> ldlt(a);
    const Vector step = ldlt.solve(-jtf);
    if (ldlt.info() != Eigen::Success || !step.allFinite()) {
      mu *= 10.0;
      if (mu > 1e20) {
        stalled = true;
        break;
      }
      continue;
    }
    const Vector trial = (x + step).cwiseMax(kNlsFloor);
    const Vector f_trial = residual(trial);
    const double trial_norm = f_trial.norm();
    if (trial_norm < fnorm) {
      x = trial;
      f = f_trial;
      fnorm = trial_norm;
      jac = jacobian(x);
      jtj = jac.transpose() * jac;
      mu = std::max(mu / 3.0, 1e-20);
    } else {
      mu *= 2.0;
      if (mu > 1e20) {
        stalled = true;
        break;
      }
    }
    history.push_back(fnorm);
  }
  return finish(V, b, x, it, converged, stalled, std::move(history));
}

SolveReport solve_baseline(const CovarianceMatrix& V, const Weights& b,
                           const BaselineConfig& cfg) {
  switch (cfg.method) {
    case BaselineMethod::OP1: return solve_op1(V, b, cfg);
    case BaselineMethod::OP2: return solve_op2(V, b, cfg);
    case BaselineMethod::NLS: return solve_nls(V, b, cfg);
  }
  throw ContractViolation("solve_baseline: unknown method");
}

}  // namespace riskfp
