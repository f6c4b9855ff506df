// Acceptance checks, one PASS/FAIL line per criterion. Exit status is 1 if
// any criterion fails.

#include "riskfp/bench.hpp"
#include "riskfp/fixed_point.hpp"
#include "riskfp/poly.hpp"
#include "riskfp/risk_measure.hpp"
#include "riskfp/rng.hpp"
#include "support.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

using namespace riskfp;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* spec, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, spec, a);
  return buf;
}

double linf(const Vector& a, const Vector& b) { return (a - b).lpNorm<Eigen::Infinity>(); }

Outcome golden_vectors() {
  const CovarianceMatrix V(testing::example_matrix());
  struct Case {
    Vector x, rc;
  };
  const std::vector<Case> cases{
      {testing::vec({0.0932, 0.0495, 0.0215, 0.5212, 0.3147}),
       testing::vec({0.0036, -0.0008, 0.0004, 0.0130, 0.0144})},
      {testing::vec({0.1450, 0.4049, 0.0298, 0.2896, 0.1307}),
       testing::vec({0.0028, -0.0006, 0.0000, 0.0027, 0.0027})},
  };
  Outcome o;
  double worst = 0.0;
  for (const auto& c : cases) {
    const Vector rc = contributions_stddev(V, c.x);
    worst = std::max(worst, linf(rc, c.rc));
  }
  const Vector first = contributions_stddev(V, cases[0].x);
  const Vector second = contributions_stddev(V, cases[1].x);
  o.pass = worst <= 5e-5 && first(1) < 0.0 && std::abs(second(2)) <= 5e-5;
  o.detail = "max entry error " + fmt("%.2e", worst) + ", asset 2 RC " + fmt("%.5f", first(1)) +
             ", asset 3 RC " + fmt("%.5f", second(2));
  return o;
}

Outcome eigenvalues() {
  const Vector ev = CovarianceMatrix(testing::example_matrix()).eigenvalues();
  const Vector expected = testing::vec({0.0031, 0.0215, 0.0515, 0.0802, 0.1996});
  const double err = linf(ev, expected);
  return {err <= 5e-5, "max error " + fmt("%.2e", err)};
}

Outcome closed_form() {
  const Index sizes[] = {2, 5, 10};
  double worst = 0.0;
  int converged = 0;
  for (int t = 0; t < 50; ++t) {
    const Index n = sizes[t % 3];
    Rng rng(mix_seed(3003, t));
    Vector var(n);
    for (Index i = 0; i < n; ++i) {
      const double s = 0.1 + 0.9 * rng.uniform();
      var(i) = s * s;
    }
    const Weights b = gen_simplex(n, mix_seed(3004, t));
    const CovarianceMatrix V{Matrix(var.asDiagonal())};
    Vector expect = b.values().cwiseSqrt().cwiseQuotient(var.cwiseSqrt());
    expect /= expect.sum();
    FpConfig cfg;
    cfg.L = 0.5;
    cfg.tol = 1e-10;
    cfg.maxit = 10000;
    const auto r = solve(V, b, cfg);
    converged += r.converged();
    worst = std::max(worst, linf(r.solution.values(), expect));
  }
  return {worst <= 1e-6 && converged == 50,
          "max l_inf error " + fmt("%.2e", worst) + ", " + std::to_string(converged) +
              "/50 converged (tol 1e-10)"};
}

struct TraceStats {
  long steps = 0, quartic = 0, cubic = 0, clamped = 0;
  long quartic_violations = 0, cubic_violations = 0, simplex_violations = 0;
  double worst_sum = 0.0, worst_min = 0.0;
};

TraceStats contraction_runs() {
  TraceStats s;
  for (int t = 0; t < 200; ++t) {
    const Instance inst = make_instance(4004, 10, t);
    FpConfig cfg;
    cfg.L = 0.5;
    cfg.record_trace = true;
    cfg.start = inst.start;
    const auto r = solve(inst.V, inst.budget, cfg);
    auto check_point = [&](const Vector& x) {
      const double sum_err = std::abs(x.sum() - 1.0);
      s.worst_sum = std::max(s.worst_sum, sum_err);
      s.worst_min = std::min(s.worst_min, x.minCoeff());
      if (sum_err > 1e-12 || x.minCoeff() < -1e-12) ++s.simplex_violations;
    };
    for (const auto& st : r.trace) {
      ++s.steps;
      check_point(st.x);
      if (st.branch == Branch::Cubic) {
        ++s.cubic;
        if (st.next_delta_norm > st.delta_norm + 1e-12) ++s.cubic_violations;
      } else if (st.branch == Branch::Quartic && !st.clamped) {
        ++s.quartic;
        if (st.next_delta_norm > 0.5 * st.delta_norm + 1e-12) ++s.quartic_violations;
      } else {
        ++s.clamped;
      }
    }
    check_point(r.solution.values());
  }
  return s;
}

Outcome contraction(const TraceStats& s) {
  const double frac = s.steps ? static_cast<double>(s.cubic) / s.steps : 0.0;
  Outcome o;
  o.pass = s.quartic_violations == 0 && s.cubic_violations == 0 && frac < 0.05;
  o.detail = std::to_string(s.steps) + " steps: " + std::to_string(s.quartic) + " quartic (" +
             std::to_string(s.quartic_violations) + " violations), " + std::to_string(s.cubic) +
             " cubic (" + std::to_string(s.cubic_violations) + " violations), " +
             std::to_string(s.clamped) + " clamped; cubic fraction " + fmt("%.4f", frac) +
             " (needs < 0.05)";
  return o;
}

Outcome simplex(const TraceStats& s) {
  return {s.simplex_violations == 0,
          "max |1'x - 1| " + fmt("%.2e", s.worst_sum) + ", min entry " +
              fmt("%.2e", s.worst_min) + ", " + std::to_string(s.simplex_violations) +
              " violations"};
}

Outcome uniqueness() {
  double worst = 0.0;
  int runs = 0, converged = 0, compared = 0;
  for (int t = 0; t < 100; ++t) {
    const Instance inst = make_instance(6006, 5, t);
    std::vector<Vector> sols;
    for (int s = 0; s < 5; ++s) {
      FpConfig cfg;
      cfg.L = 0.5;
      cfg.tol = 1e-10;
      cfg.maxit = 5000;
      cfg.start = gen_simplex(5, mix_seed(inst.seed, 10 + s));
      const auto r = solve(inst.V, inst.budget, cfg);
      ++runs;
      if (!r.converged()) continue;
      ++converged;
      sols.push_back(r.solution.values());
    }
    if (sols.size() > 1) ++compared;
    for (std::size_t i = 1; i < sols.size(); ++i) worst = std::max(worst, linf(sols[i], sols[0]));
  }
  return {worst <= 1e-5 && compared > 0,
          std::to_string(converged) + "/" + std::to_string(runs) +
              " runs converged (tol 1e-10), max disagreement " + fmt("%.2e", worst)};
}

Outcome desk_table() {
  SuiteConfig cfg;
  cfg.sizes = {5, 10, 50, 100};
  cfg.trials = 100;
  cfg.l_values = {0.5};
  cfg.settings.L = 0.5;
  cfg.settings.tol = 1e-6;
  cfg.settings.maxit = 1000;
  const auto res = run_suite(cfg);

  std::map<Index, std::map<SolverId, const SummaryRow*>> by_size;
  for (const auto& row : res.summary) by_size[row.n][row.solver] = &row;

  Outcome o;
  for (const auto& [n, rows] : by_size) {
    const SummaryRow* fp = rows.at(SolverId::FP);
    bool ok = fp->mean_accuracy <= 1e-2 && fp->median_accuracy <= 1e-3;
    std::string beats;
    for (SolverId id : {SolverId::OP1, SolverId::OP2, SolverId::NLS}) {
      const SummaryRow* other = rows.at(id);
      const bool below = fp->mean_accuracy < other->mean_accuracy;
      ok = ok && below;
      beats += " " + std::string(to_string(id)) + "=" + fmt("%.2e", other->mean_accuracy) +
               (below ? "" : "(!)");
    }
    o.pass = o.pass && ok;
    o.detail += "\n    N=" + std::to_string(n) + " FP mean " + fmt("%.2e", fp->mean_accuracy) +
                " median " + fmt("%.2e", fp->median_accuracy) + " |" + beats;
  }
  return o;
}

Outcome l_trend() {
  SuiteConfig cfg;
  cfg.sizes = {50};
  cfg.trials = 100;
  cfg.solvers = {SolverId::FP};
  cfg.l_values = {0.5, 0.9, 0.99};
  const auto res = run_suite(cfg);
  std::vector<double> means;
  Outcome o;
  for (const auto& row : res.summary) {
    means.push_back(row.mean_iterations);
    o.detail += "L=" + fmt("%g", *row.L) + ": " + fmt("%.1f", row.mean_iterations) + "  ";
  }
  o.pass = means.size() == 3 && means[0] <= means[1] && means[1] <= means[2] &&
           means[2] >= 2.0 * means[0];
  o.detail += "ratio " + fmt("%.2f", means.back() / means.front());
  return o;
}

Outcome agreement() {
  const SolverSettings s;
  int found = 0, scanned = 0;
  double worst = 0.0;
  std::map<SolverId, int> failures;
  for (int t = 0; found < 50 && t < 2000; ++t, ++scanned) {
    const Instance inst = make_instance(9009, 10, t);
    std::vector<Vector> sols;
    bool all = true;
    for (SolverId id : {SolverId::FP, SolverId::OP1, SolverId::OP2, SolverId::NLS}) {
      const auto rec = run_trial(inst.V, inst.start, inst.budget, id, s);
      if (!rec.converged || !rec.solution) {
        all = false;
        ++failures[id];
        continue;
      }
      sols.push_back(rec.solution->values());
    }
    if (!all) continue;
    ++found;
    for (std::size_t i = 0; i < sols.size(); ++i)
      for (std::size_t j = i + 1; j < sols.size(); ++j)
        worst = std::max(worst, linf(sols[i], sols[j]));
  }
  std::string fails;
  for (const auto& [id, c] : failures)
    fails += " " + std::string(to_string(id)) + "=" + std::to_string(c);
  return {found == 50 && worst <= 1e-3,
          std::to_string(found) + " instances with all four converged out of " +
              std::to_string(scanned) + " scanned, max pairwise disagreement " +
              fmt("%.2e", worst) + "; non-converged runs:" + fails};
}

Outcome polynomial_identity() {
  double worst_q = 0.0, worst_e = 0.0;
  for (int t = 0; t < 500; ++t) {
    Rng rng(mix_seed(1010, t));
    const Index n = 2 + static_cast<Index>(rng.uniform() * 9);
    const CovarianceMatrix V = testing::random_spd(n, mix_seed(1011, t));
    const Weights b = gen_simplex(n, mix_seed(1012, t));
    const Vector x = gen_simplex(n, mix_seed(1013, t)).values();
    const double k = -5.0 + 10.0 * rng.uniform();
    const double L = 0.01 + 0.98 * rng.uniform();

    const Vector d = delta_map(V, b, x);
    const StepVectors sv = step_vectors(V, b, x, d);
    const StepPolynomials polys = build_step_polynomials(d, sv, L);
    const Vector moved = delta_map(V, b, x + k * d);
    const double exact = moved.squaredNorm() - L * L * d.squaredNorm();
    const double scale = moved.squaredNorm() + L * L * d.squaredNorm();
    worst_q = std::max(worst_q, std::abs(eval(polys.quartic, k) - exact) / scale);

    const Vector expansion = d + k * (sv.d1 + sv.d2) + k * k * sv.d3;
    const double escale = d.norm() + std::abs(k) * (sv.d1 + sv.d2).norm() + k * k * sv.d3.norm();
    worst_e = std::max(worst_e, (moved - expansion).norm() / escale);
  }
  return {worst_q <= 1e-10 && worst_e <= 1e-10,
          "quartic relative error " + fmt("%.2e", worst_q) + ", expansion relative error " +
              fmt("%.2e", worst_e)};
}

}  // namespace

int main() {
  bool all = true;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& check) {
    const auto t0 = std::chrono::steady_clock::now();
    const Outcome o = check();
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    all = all && o.pass;
    std::printf("criterion %2d %-28s %s  (%.1fs) %s\n", id, name, o.pass ? "PASS" : "FAIL", secs,
                o.detail.c_str());
    std::fflush(stdout);
  };

  report(1, "golden contributions", golden_vectors);
  report(2, "eigenvalues", eigenvalues);
  report(3, "closed-form diagonal", closed_form);
  TraceStats stats;
  report(4, "contraction", [&] {
    stats = contraction_runs();
    return contraction(stats);
  });
  report(5, "simplex preservation", [&] { return simplex(stats); });
  report(6, "uniqueness", uniqueness);
  report(7, "desk accuracy table", desk_table);
  report(8, "iterations vs L", l_trend);
  report(9, "cross-solver agreement", agreement);
  report(10, "polynomial identity", polynomial_identity);
  return all ? 0 : 1;
}
