#include "riskfp/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Risk-budgeting portfolios by fixed-point iteration"};
  app.require_subcommand(1);

  riskfp::SolveRequest solve;
  std::string format = "text";
  auto* solve_cmd = app.add_subcommand("solve", "Solve one instance from files");
  solve_cmd->add_option("--cov", solve.covariance_path, "Covariance CSV (N x N)")->required();
  solve_cmd->add_option("--budget", solve.budget, "Budget: comma list or file")->required();
  solve_cmd->add_option("--L", solve.L, "Contraction target in (0, 1)")->capture_default_str();
  solve_cmd->add_option("--tol", solve.tol, "Stop when ||D(x)|| <= tol")->capture_default_str();
  solve_cmd->add_option("--maxit", solve.maxit, "Iteration limit")->capture_default_str();
  solve_cmd->add_option("--start", solve.start, "Start point: comma list or file");
  solve_cmd->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"json", "csv", "text"}))
      ->capture_default_str();

  riskfp::BenchRequest bench;
  std::vector<long long> sizes;
  int trials = 0;
  std::string solvers;
  auto* bench_cmd = app.add_subcommand("bench", "Run the seeded benchmark suite");
  auto* sizes_opt = bench_cmd->add_option("--sizes", sizes, "Asset counts")->delimiter(',');
  auto* trials_opt = bench_cmd->add_option("--trials", trials, "Instances per size");
  bench_cmd->add_option("--solvers", bench.solvers, "fp,op1,op2,nls")->delimiter(',');
  bench_cmd->add_option("--sweep-L", bench.sweep_L, "L values for FP")->delimiter(',');
  bench_cmd->add_option("--seed", bench.seed, "Master seed")->capture_default_str();
  bench_cmd->add_option("--out", bench.out_dir, "Output directory")->capture_default_str();
  bench_cmd->add_option("--threads", bench.threads, "Worker threads, 0 = all cores");
  bench_cmd->add_flag("--full-scale", bench.full_scale, "Sizes 5..200, 1000 trials");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*solve_cmd) {
    solve.format = riskfp::parse_format(format);
    return riskfp::cmd_solve(solve, std::cout, std::cerr);
  }
  if (sizes_opt->count()) bench.sizes = sizes;
  if (trials_opt->count()) bench.trials = trials;
  return riskfp::cmd_bench(bench, std::cout, std::cerr);
}
