#include "riskfp/cli.hpp"

#include "riskfp/bench.hpp"
#include "riskfp/csv_io.hpp"
#include "riskfp/fixed_point.hpp"
#include "riskfp/risk_measure.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>

namespace riskfp {

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string join(const Vector& v, const char* spec) {
  std::string s;
  for (Index i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += fmt(spec, v(i));
  }
  return s;
}

Vector load_weights(const std::string& text) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(text, ec)) return read_weights_file(text);
  return parse_number_list(text);
}

/// Parses a user-supplied interior simplex point; `what` names it in messages.
Weights interior_from_input(const std::string& text, const char* what) {
  Vector v = load_weights(text);
  const double sum = v.sum();
  if (!std::isfinite(sum) || std::abs(sum - 1.0) > kInputSumTol) {
    throw InvalidWeightsError(std::string(what) + " is not on the simplex: entries sum to " +
                              fmt("%.10g", sum));
  }
  for (Index i = 0; i < v.size(); ++i) {
    if (!(v(i) > 0.0)) {
      throw InvalidWeightsError(std::string(what) + " entry " + std::to_string(i) + " = " +
                                fmt("%.10g", v(i)) + " is not strictly positive");
    }
  }
  return Weights::interior(v / sum);
}

void print_report(const SolveReport& r, const CovarianceMatrix& V, const Weights& b,
                  OutputFormat format, std::ostream& out) {
  const Vector& x = r.solution.values();
  const Vector rc = contributions_stddev(V, x);
  const Vector nrc = normalized_contributions(rc);
  switch (format) {
    case OutputFormat::Text:
      out << "weights: " << join(x, "%.6f") << '\n'
          << "risk_contributions: " << join(rc, "%.6f") << '\n'
          << "normalized_contributions: " << join(nrc, "%.6f") << '\n'
          << "budget: " << join(b.values(), "%.6f") << '\n'
          << "accuracy: " << fmt("%.6e", r.accuracy) << '\n'
          << "iterations: " << r.iterations << '\n'
          << "termination: " << to_string(r.termination) << (r.stalled ? " (stalled)" : "")
          << '\n'
          << "cubic_steps: " << r.cubic_fallback_count << '\n'
          << "clamped_steps: " << r.clamp_count << '\n';
      break;
    case OutputFormat::Csv:
      out << "# accuracy," << fmt("%.17g", r.accuracy) << '\n'
          << "# iterations," << r.iterations << '\n'
          << "# termination," << to_string(r.termination) << '\n'
          << "asset,weight,risk_contribution,normalized_contribution,budget\n";
      for (Index i = 0; i < x.size(); ++i) {
        out << i << ',' << fmt("%.17g", x(i)) << ',' << fmt("%.17g", rc(i)) << ','
            << fmt("%.17g", nrc(i)) << ',' << fmt("%.17g", b[i]) << '\n';
      }
      break;
    case OutputFormat::Json: {
      auto vec = [](const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
      nlohmann::json j;
      j["weights"] = vec(x);
      j["risk_contributions"] = vec(rc);
      j["normalized_contributions"] = vec(nrc);
      j["budget"] = vec(b.values());
      j["accuracy"] = r.accuracy;
      j["final_delta_norm"] = r.final_delta_norm;
      j["iterations"] = r.iterations;
      j["termination"] = std::string(to_string(r.termination));
      j["stalled"] = r.stalled;
      j["cubic_steps"] = r.cubic_fallback_count;
      j["clamped_steps"] = r.clamp_count;
      out << j.dump(2) << '\n';
      break;
    }
  }
}

}  // namespace

OutputFormat parse_format(std::string_view s) {
  if (s == "json") return OutputFormat::Json;
  if (s == "csv") return OutputFormat::Csv;
  if (s == "text") return OutputFormat::Text;
  throw std::invalid_argument("unknown format '" + std::string(s) + "'");
}

int cmd_solve(const SolveRequest& req, std::ostream& out, std::ostream& err) {
  std::optional<CovarianceMatrix> V;
  std::optional<Weights> b;
  FpConfig cfg;
  try {
    const ParsedMatrix parsed = read_matrix_csv(req.covariance_path);
    if (parsed.asymmetry > kAsymmetryWarning) {
      err << "warning: " << req.covariance_path << ": asymmetry " << fmt("%.3g", parsed.asymmetry)
          << " exceeds " << fmt("%.0e", kAsymmetryWarning) << ", using (V + V')/2\n";
    }
    V.emplace(parsed.matrix);
    b = interior_from_input(req.budget, "budget");
    if (b->size() != V->dim()) {
      throw ContractViolation("budget has " + std::to_string(b->size()) +
                              " entries, covariance is " + std::to_string(V->dim()) + "x" +
                              std::to_string(V->dim()));
    }
    cfg.L = req.L;
    cfg.tol = req.tol;
    cfg.maxit = req.maxit;
    if (req.start) {
      cfg.start = interior_from_input(*req.start, "start");
    }
    cfg.validate(V->dim());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    const SolveReport report = solve(*V, *b, cfg);
    print_report(report, *V, *b, req.format, out);
    return report.converged() ? 0 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int cmd_bench(const BenchRequest& req, std::ostream& out, std::ostream& err) {
  SuiteConfig cfg;
  try {
    if (req.full_scale) {
      cfg.sizes = {5, 10, 50, 100, 200};
      cfg.trials = 1000;
    }
    if (req.sizes) {
      cfg.sizes.clear();
      for (long long n : *req.sizes) cfg.sizes.push_back(static_cast<Index>(n));
    }
    if (req.trials) cfg.trials = *req.trials;
    cfg.solvers.clear();
    for (const auto& s : req.solvers) cfg.solvers.push_back(parse_solver(s));
    if (!req.sweep_L.empty()) cfg.l_values = req.sweep_L;
    cfg.master_seed = req.seed;
    cfg.threads = req.threads;
    cfg.validate();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    const SuiteResult result = run_suite(cfg);
    write_suite(result, cfg, req.out_dir);
    out << format_table(result.summary);
    out << "wrote " << (std::filesystem::path(req.out_dir) / "records.csv").string() << ", "
        << (std::filesystem::path(req.out_dir) / "summary.csv").string() << ", "
        << (std::filesystem::path(req.out_dir) / "metadata.json").string() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace riskfp
