#include "riskfp/fixed_point.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace riskfp {

namespace {

constexpr int kMaxHalvings = 60;

void require_same_dim(Index a, Index b, const char* what) {
  if (a != b) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << a << " vs " << b << ")";
    throw ContractViolation(os.str());
  }
}

void require_interior_budget(const Weights& b) {
  if (!b.is_interior()) {
    throw InvalidBudgetError("risk budget must have every entry strictly positive");
  }
}

// x + k d, with rounding residue removed so the result sits exactly on the simplex.
Vector advance(const Vector& x, const Vector& delta, double k) {
  Vector next = (x + k * delta).cwiseMax(0.0);
  return next / next.sum();
}

struct Side {
  double alpha;
  std::optional<double> beta;
};

}  // namespace

std::string_view to_string(Branch b) noexcept {
  switch (b) {
    case Branch::Quartic: return "quartic";
    case Branch::Cubic: return "cubic";
    case Branch::Clamped: return "clamped";
    case Branch::Converged: return "converged";
  }
  return "?";
}

std::string_view to_string(Termination t) noexcept {
  return t == Termination::Tolerance ? "tolerance" : "maxiter";
}

void FpConfig::validate(Index n) const {
  if (!(L > 0.0 && L < 1.0)) throw ContractViolation("FpConfig: L must lie in (0, 1)");
  if (!(tol > 0.0)) throw ContractViolation("FpConfig: tol must be positive");
  if (maxit < 1) throw ContractViolation("FpConfig: maxit must be at least 1");
  if (!(step_margin > 0.0)) throw ContractViolation("FpConfig: step_margin must be positive");
  if (start) {
    require_same_dim(start->size(), n, "FpConfig start");
    if (!start->is_interior()) {
      throw ContractViolation("FpConfig: start must be strictly inside the simplex");
    }
  }
}

Vector delta_map(const CovarianceMatrix& V, const Weights& b, const Vector& x) {
  require_same_dim(V.dim(), x.size(), "delta_map");
  require_same_dim(b.size(), x.size(), "delta_map budget");
  const Vector vx = V.matrix() * x;
  return x.cwiseProduct(vx) - x.dot(vx) * b.values();
}

Vector delta_map(const ContributionProvider& rc, const Weights& b, const Vector& x) {
  const Vector c = rc(x);
  require_same_dim(c.size(), b.size(), "delta_map budget");
  return c - c.sum() * b.values();
}

StepVectors step_vectors(const CovarianceMatrix& V, const Weights& b, const Vector& x,
                         const Vector& delta) {
  require_same_dim(V.dim(), x.size(), "step_vectors");
  require_same_dim(delta.size(), x.size(), "step_vectors delta");
  require_same_dim(b.size(), x.size(), "step_vectors budget");
  const Matrix& v = V.matrix();
  const Vector& bv = b.values();
  const Vector vx = v * x;
  const Vector vd = v * delta;
  StepVectors sv;
  sv.d1 = x.cwiseProduct(vd) - x.dot(vd) * bv;
  sv.d2 = delta.cwiseProduct(vx) - delta.dot(vx) * bv;
  sv.d3 = delta.cwiseProduct(vd) - delta.dot(vd) * bv;
  return sv;
}

StepPolynomials build_step_polynomials(const Vector& delta, const StepVectors& sv, double L) {
  const Vector e = sv.d1 + sv.d2;
  const double dd = delta.squaredNorm();
  const double de = delta.dot(e);
  const double mid = 2.0 * delta.dot(sv.d3) + e.squaredNorm();
  const double e3 = e.dot(sv.d3);
  const double d33 = sv.d3.squaredNorm();
  StepPolynomials p;
  p.quartic = Polynomial{(1.0 - L * L) * dd, 2.0 * de, mid, 2.0 * e3, d33};
  p.cubic = Polynomial{2.0 * de, mid, 2.0 * e3, d33};
  return p;
}

StepChoice select_step(const StepPolynomials& polys, double margin) {
  const Polynomial& q = polys.quartic;
  const Polynomial& c = polys.cubic;
  if (q.size() == 0 || q[0] == 0.0) return {0.0, Branch::Converged};

  const std::vector<double> roots = real_roots(q);
  std::vector<Side> sides;
  {
    auto first_pos = std::upper_bound(roots.begin(), roots.end(), 0.0);
    if (first_pos != roots.end()) {
      Side s{*first_pos, std::nullopt};
      if (first_pos + 1 != roots.end()) s.beta = *(first_pos + 1);
      sides.push_back(s);
    }
    auto last_neg = std::lower_bound(roots.begin(), roots.end(), 0.0);
    if (last_neg != roots.begin()) {
      Side s{*(last_neg - 1), std::nullopt};
      if (last_neg - 1 != roots.begin()) s.beta = *(last_neg - 2);
      sides.push_back(s);
    }
    std::stable_sort(sides.begin(), sides.end(), [](const Side& a, const Side& b) {
      if (std::abs(a.alpha) != std::abs(b.alpha)) return std::abs(a.alpha) < std::abs(b.alpha);
      return a.alpha < b.alpha;
    });
  }
  for (const Side& s : sides) {
    double k = s.alpha * (1.0 + margin);
    std::optional<double> cap;
    if (s.beta) cap = s.alpha + 0.5 * (*s.beta - s.alpha);
    if (cap && std::abs(k) > std::abs(*cap)) k = *cap;
    if (q(k) < 0.0) return {k, Branch::Quartic};
    if (cap && q(*cap) < 0.0) return {*cap, Branch::Quartic};
  }

  // No contraction available: settle for a strict decrease, k C(k) < 0.
  const double c0 = c.size() > 0 ? c[0] : 0.0;
  const double c1 = c.size() > 1 ? c[1] : 0.0;
  std::vector<double> directions;
  if (c0 < 0.0) {
    directions = {1.0};
  } else if (c0 > 0.0) {
    directions = {-1.0};
  } else {
    directions = {-1.0, 1.0};
  }
  const std::vector<double> croots = c.is_zero() ? std::vector<double>{} : real_roots(c);
  for (double dir : directions) {
    std::optional<double> nearest;
    for (double r : croots) {
      if (r * dir <= 0.0) continue;
      if (!nearest || std::abs(r) < std::abs(*nearest)) nearest = r;
    }
    double k;
    if (nearest) {
      k = 0.5 * *nearest;
    } else {
      k = dir * (c1 != 0.0 && c0 != 0.0 ? std::abs(c0 / c1) : 1.0);
    }
    if (k * c(k) < 0.0) return {k, Branch::Cubic};
  }
  return {0.0, Branch::Cubic};
}

double clamp_step(const Vector& x, const Vector& delta, double k) {
  require_same_dim(x.size(), delta.size(), "clamp_step");
  double bound = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < x.size(); ++i) {
    const double d = delta(i);
    if (d == 0.0) continue;
    const double kd = k * d;
    if (kd > 0.0) {
      bound = std::min(bound, (1.0 - x(i)) / std::abs(d));
    } else if (kd < 0.0) {
      bound = std::min(bound, std::max(x(i), 0.0) / std::abs(d));
    }
  }
  if (std::abs(k) <= bound) return k;
  return std::copysign(bound, k);
}

SolveReport solve(const CovarianceMatrix& V, const Weights& b, const FpConfig& cfg) {
  const Index n = V.dim();
  require_same_dim(b.size(), n, "solve budget");
  require_interior_budget(b);
  cfg.validate(n);

  Vector x = cfg.start ? cfg.start->values() : Weights::uniform(n).values();
  Vector delta = delta_map(V, b, x);
  double dnorm = delta.norm();

  SolveReport report{.solution = Weights::uniform(n)};
  report.objective_history.push_back(dnorm);

  while (dnorm > cfg.tol && report.iterations < cfg.maxit) {
    const StepVectors sv = step_vectors(V, b, x, delta);
    const StepPolynomials polys = build_step_polynomials(delta, sv, cfg.L);
    const StepChoice choice = select_step(polys, cfg.step_margin);
    if (choice.branch == Branch::Converged) break;

    Branch branch = choice.branch;
    double k = choice.k;
    bool ok = k != 0.0;
    bool clamped = false;

    if (ok) {
      const double kc = clamp_step(x, delta, k);
      if (std::abs(kc) < std::abs(k)) {
        clamped = true;
        k = kc;
        if (branch == Branch::Quartic) branch = Branch::Clamped;
        if (!(branch == Branch::Clamped && polys.quartic(k) < 0.0)) {
          int h = 0;
          while (!(k * polys.cubic(k) < 0.0) && h < kMaxHalvings) {
            k *= 0.5;
            ++h;
          }
          ok = k * polys.cubic(k) < 0.0;
        }
      }
    }

    Vector x_next;
    Vector delta_next;
    double dnorm_next = dnorm;
    if (ok) {
      x_next = advance(x, delta, k);
      delta_next = delta_map(V, b, x_next);
      dnorm_next = delta_next.norm();
      // The polynomial certificate is exact up to rounding; confirm on the map itself.
      const bool contracting = branch == Branch::Quartic && dnorm_next <= cfg.L * dnorm;
      if (!contracting && !(dnorm_next < dnorm)) {
        if (branch == Branch::Quartic) branch = Branch::Cubic;
        int h = 0;
        while (!(dnorm_next < dnorm) && h < kMaxHalvings) {
          k *= 0.5;
          x_next = advance(x, delta, k);
          delta_next = delta_map(V, b, x_next);
          dnorm_next = delta_next.norm();
          ++h;
        }
        ok = dnorm_next < dnorm;
      } else if (branch == Branch::Quartic && !contracting) {
        branch = Branch::Cubic;
      }
    }

    if (!ok) {
      report.stalled = true;
      break;
    }

    if (clamped) ++report.clamp_count;
    if (branch == Branch::Cubic) ++report.cubic_fallback_count;
    if (cfg.record_trace) {
      report.trace.push_back(
          IterationState{x, delta, k, branch, clamped, dnorm, dnorm_next});
    }
    x = std::move(x_next);
    delta = std::move(delta_next);
    dnorm = dnorm_next;
    ++report.iterations;
    report.objective_history.push_back(dnorm);
  }

  report.solution = Weights::simplex(x);
  report.final_delta_norm = dnorm;
  report.accuracy = accuracy(V, x, b);
  report.termination = dnorm <= cfg.tol ? Termination::Tolerance : Termination::MaxIter;
  return report;
}

SolveReport solve(const ContributionProvider& rc, const Weights& b, const FpConfig& cfg) {
  require_interior_budget(b);
  const Index n = b.size();
  cfg.validate(n);

  Vector x = cfg.start ? cfg.start->values() : Weights::uniform(n).values();
  Vector delta = delta_map(rc, b, x);
  double dnorm = delta.norm();

  SolveReport report{.solution = Weights::uniform(n)};
  report.objective_history.push_back(dnorm);

  while (dnorm > cfg.tol && report.iterations < cfg.maxit) {
    // D carries the units of the contributions, so 1 / |1'RC| sets the step scale.
    const double risk = std::abs(rc(x).sum());
    const double unit = risk > 0.0 ? 1.0 / risk : 1.0;

    double best_k = 0.0;
    double best_norm = dnorm;
    Vector best_x, best_delta;
    Branch branch = Branch::Cubic;
    bool clamped = false;
    for (double dir : {-1.0, 1.0}) {
      for (int j = 0; j <= 40 && branch != Branch::Quartic; ++j) {
        const double k_raw = dir * unit * std::ldexp(1.0, 8 - j);
        const double k = clamp_step(x, delta, k_raw);
        if (k == 0.0) break;
        Vector xn = advance(x, delta, k);
        Vector dn = delta_map(rc, b, xn);
        const double nn = dn.norm();
        if (nn < best_norm) {
          best_norm = nn;
          best_k = k;
          best_x = std::move(xn);
          best_delta = std::move(dn);
          clamped = std::abs(k) < std::abs(k_raw);
          if (nn <= cfg.L * dnorm) branch = Branch::Quartic;
        }
      }
      if (branch == Branch::Quartic) break;
    }
    if (best_k == 0.0) {
      report.stalled = true;
      break;
    }
    if (clamped) {
      ++report.clamp_count;
      if (branch == Branch::Quartic) branch = Branch::Clamped;
    }
    if (branch == Branch::Cubic) ++report.cubic_fallback_count;
    if (cfg.record_trace) {
      report.trace.push_back(IterationState{x, delta, best_k, branch, clamped, dnorm, best_norm});
    }
    x = std::move(best_x);
    delta = std::move(best_delta);
    dnorm = best_norm;
    ++report.iterations;
    report.objective_history.push_back(dnorm);
  }

  report.solution = Weights::simplex(x);
  report.final_delta_norm = dnorm;
  report.accuracy = (normalized_contributions(rc(x)) - b.values()).norm();
  report.termination = dnorm <= cfg.tol ? Termination::Tolerance : Termination::MaxIter;
  return report;
}

}  // namespace riskfp
