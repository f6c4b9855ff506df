#pragma once

#include "riskfp/types.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace riskfp {

enum class OutputFormat { Json, Csv, Text };

/// "json", "csv" or "text"; throws std::invalid_argument otherwise.
OutputFormat parse_format(std::string_view s);

/// Typed-in weights may be rounded: sums within this of one are rescaled.
inline constexpr double kInputSumTol = 1e-6;

struct SolveRequest {
  std::string covariance_path;
  std::string budget;  ///< an existing file path, else an inline list
  double L = 0.9;
  double tol = 1e-6;
  int maxit = 1000;
  std::optional<std::string> start;  ///< inline list or file path
  OutputFormat format = OutputFormat::Text;
};

/// Exit status: 0 on Tolerance termination, 2 on MaxIter, 1 on input error.
int cmd_solve(const SolveRequest& req, std::ostream& out, std::ostream& err);

struct BenchRequest {
  std::optional<std::vector<long long>> sizes;  ///< default {5,10,50,100}
  std::optional<int> trials;                    ///< default 100
  std::vector<std::string> solvers{"fp", "op1", "op2", "nls"};
  std::vector<double> sweep_L;  ///< empty: L = 0.5
  std::uint64_t seed = 42;
  std::string out_dir = "bench_out";
  bool full_scale = false;  ///< sizes {5,10,50,100,200}, 1000 trials unless given
  unsigned threads = 0;
};

/// Exit status: 0 on success, 1 on invalid arguments or an I/O failure.
int cmd_bench(const BenchRequest& req, std::ostream& out, std::ostream& err);

}  // namespace riskfp
