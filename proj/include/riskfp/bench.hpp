#pragma once

#include "riskfp/fixed_point.hpp"
#include "riskfp/types.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace riskfp {

struct InstanceSpec {
  Index n = 2;
  std::uint64_t seed = 0;
  std::optional<double> condition_target;  ///< lambda_max / lambda_min, >= 1
  bool near_singular = false;
};

/// Q diag(lambda) Q' with Q Haar-distributed. Without a condition target the
/// eigenvalues are 10^(-2u), u ~ U(0,1); with one they are log-spaced between
/// 1 and 1/target. near_singular then sets the smallest to 1e-8 times the
/// largest. The spectrum is scaled so that trace(V) = n.
CovarianceMatrix gen_spd(const InstanceSpec& spec);

/// Uniform draw on the simplex by normalized exponentials, floored at 1e-10.
Weights gen_simplex(Index n, std::uint64_t seed);

enum class SolverId { FP, OP1, OP2, NLS };

std::string_view to_string(SolverId s) noexcept;
/// Case-insensitive; throws std::invalid_argument on an unknown name.
SolverId parse_solver(std::string_view name);

struct SolverSettings {
  double L = 0.5;
  double tol = 1e-6;
  int maxit = 1000;
  double step_margin = 0.01;
  int baseline_max_iterations = 1000;
  double baseline_grad_tol = 1e-8;
};

struct BenchmarkRecord {
  SolverId solver = SolverId::FP;
  Index n = 0;
  std::uint64_t seed = 0;
  std::optional<double> L;  ///< FP only
  double wall_time_seconds = 0.0;
  double accuracy = 0.0;
  int iterations = 0;
  bool converged = false;
  std::optional<Weights> solution;
  std::string error;  ///< non-empty when the solver threw
};

/// Runs one solver from `start`. Exceptions become converged = false with the
/// accuracy of the start point. Runs under 1 ms are repeated and the median of
/// three is reported.
BenchmarkRecord run_trial(const CovarianceMatrix& V, const Weights& start, const Weights& b,
                          SolverId solver, const SolverSettings& settings);

struct Instance {
  std::uint64_t seed;
  CovarianceMatrix V;
  Weights start;
  Weights budget;
};

/// Trial `trial` of size n under a master seed. A fraction of instances is
/// near-singular.
Instance make_instance(std::uint64_t master_seed, Index n, std::uint64_t trial,
                       double near_singular_fraction = 0.1);

struct SuiteConfig {
  std::vector<Index> sizes{5, 10, 50, 100};
  int trials = 100;
  std::vector<SolverId> solvers{SolverId::FP, SolverId::OP1, SolverId::OP2, SolverId::NLS};
  std::vector<double> l_values{0.5};  ///< FP is run once per value
  std::uint64_t master_seed = 42;
  SolverSettings settings;
  double near_singular_fraction = 0.1;
  unsigned threads = 0;  ///< 0: hardware concurrency; 1: sequential timing

  void validate() const;
};

struct SummaryRow {
  SolverId solver;
  Index n;
  std::optional<double> L;
  int trials = 0;
  int converged = 0;
  double mean_time_s = 0.0;
  double mean_accuracy = 0.0;
  double median_accuracy = 0.0;
  double mean_iterations = 0.0;
};

struct SuiteResult {
  std::vector<BenchmarkRecord> records;  ///< ordered by (n, trial, solver, L)
  std::vector<SummaryRow> summary;       ///< ordered by (n, solver, L)
};

SuiteResult run_suite(const SuiteConfig& cfg);

std::vector<SummaryRow> summarize(const std::vector<BenchmarkRecord>& records);

/// records.csv, summary.csv and metadata.json under `dir` (created if
/// missing). Throws std::runtime_error naming the path on failure.
void write_suite(const SuiteResult& result, const SuiteConfig& cfg,
                 const std::filesystem::path& dir);

/// Fixed-width table, one line per summary row.
std::string format_table(const std::vector<SummaryRow>& rows);

}  // namespace riskfp
