#include "riskfp/bench.hpp"

#include "riskfp/baselines.hpp"
#include "riskfp/risk_measure.hpp"
#include "riskfp/rng.hpp"

#include <json.hpp>

#include <Eigen/QR>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace riskfp {

namespace {

constexpr double kSimplexFloor = 1e-10;

Matrix haar_orthogonal(Index n, Rng& rng) {
  Matrix g(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string l_field(const std::optional<double>& L) { return L ? fmt("%.17g", *L) : ""; }

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot open '" + p.string() + "' for writing");
  return out;
}

void close_out(std::ofstream& out, const std::filesystem::path& p) {
  out.close();
  if (!out) throw std::runtime_error("write failed for '" + p.string() + "'");
}

}  // namespace

CovarianceMatrix gen_spd(const InstanceSpec& spec) {
  if (spec.n < 2) throw ContractViolation("gen_spd: n must be at least 2");
  if (spec.condition_target && !(*spec.condition_target >= 1.0))
    throw ContractViolation("gen_spd: condition_target must be >= 1");
  const Index n = spec.n;
  Rng rng(spec.seed);
  const Matrix q = haar_orthogonal(n, rng);

  Vector lambda(n);
  if (spec.condition_target) {
    const double lc = std::log10(*spec.condition_target);
    for (Index i = 0; i < n; ++i)
      lambda(i) = std::pow(10.0, -lc * static_cast<double>(i) / static_cast<double>(n - 1));
  } else {
    for (Index i = 0; i < n; ++i) lambda(i) = std::pow(10.0, -2.0 * rng.uniform());
  }
  if (spec.near_singular) {
    Index imin = 0;
    lambda.minCoeff(&imin);
    lambda(imin) = 1e-8 * lambda.maxCoeff();
  }
  lambda *= static_cast<double>(n) / lambda.sum();

  Matrix v = q * lambda.asDiagonal() * q.transpose();
  v = 0.5 * (v + v.transpose()).eval();
  return CovarianceMatrix(v);
}

Weights gen_simplex(Index n, std::uint64_t seed) {
  if (n < 2) throw ContractViolation("gen_simplex: n must be at least 2");
  Rng rng(seed);
  Vector e(n);
  for (Index i = 0; i < n; ++i) e(i) = rng.exponential();
  e /= e.sum();
  e = e.cwiseMax(kSimplexFloor);
  e /= e.sum();
  return Weights::interior(e);
}

std::string_view to_string(SolverId s) noexcept {
  switch (s) {
    case SolverId::FP: return "FP";
    case SolverId::OP1: return "OP1";
    case SolverId::OP2: return "OP2";
    case SolverId::NLS: return "NLS";
  }
  return "?";
}

SolverId parse_solver(std::string_view name) {
  std::string up(name);
  for (char& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (SolverId s : {SolverId::FP, SolverId::OP1, SolverId::OP2, SolverId::NLS})
    if (up == to_string(s)) return s;
  throw std::invalid_argument("unknown solver '" + std::string(name) +
                              "' (expected fp, op1, op2 or nls)");
}

BenchmarkRecord run_trial(const CovarianceMatrix& V, const Weights& start, const Weights& b,
                          SolverId solver, const SolverSettings& settings) {
  BenchmarkRecord rec;
  rec.solver = solver;
  rec.n = V.dim();
  if (solver == SolverId::FP) rec.L = settings.L;

  auto once = [&]() -> SolveReport {
    if (solver == SolverId::FP) {
      FpConfig cfg;
      cfg.L = settings.L;
      cfg.tol = settings.tol;
      cfg.maxit = settings.maxit;
      cfg.step_margin = settings.step_margin;
      cfg.start = start;
      return solve(V, b, cfg);
    }
    BaselineConfig cfg;
    cfg.method = solver == SolverId::OP1   ? BaselineMethod::OP1
                 : solver == SolverId::OP2 ? BaselineMethod::OP2
                                           : BaselineMethod::NLS;
    cfg.max_iterations = settings.baseline_max_iterations;
    cfg.grad_tol = settings.baseline_grad_tol;
    cfg.start = start;
    return solve_baseline(V, b, cfg);
  };

  using Clock = std::chrono::steady_clock;
  try {
    auto t0 = Clock::now();
    SolveReport report = once();
    double elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
    if (elapsed < 1e-3) {
      std::vector<double> times{elapsed};
      for (int rep = 0; rep < 2; ++rep) {
        t0 = Clock::now();
        (void)once();
        times.push_back(std::chrono::duration<double>(Clock::now() - t0).count());
      }
      elapsed = median(times);
    }
    rec.wall_time_seconds = elapsed;
    rec.accuracy = accuracy(V, report.solution.values(), b);
    rec.iterations = report.iterations;
    rec.converged = report.converged();
    rec.solution = report.solution;
  } catch (const std::exception& e) {
    rec.converged = false;
    rec.error = e.what();
    try {
      rec.accuracy = accuracy(V, start.values(), b);
    } catch (const std::exception&) {
      rec.accuracy = 0.0;
    }
  }
  return rec;
}

Instance make_instance(std::uint64_t master_seed, Index n, std::uint64_t trial,
                       double near_singular_fraction) {
  const std::uint64_t seed = mix_seed(mix_seed(master_seed, static_cast<std::uint64_t>(n)), trial);
  Rng pick(mix_seed(seed, 3));
  InstanceSpec spec;
  spec.n = n;
  spec.seed = mix_seed(seed, 0);
  spec.near_singular = pick.uniform() < near_singular_fraction;
  return Instance{seed, gen_spd(spec), gen_simplex(n, mix_seed(seed, 1)),
                  gen_simplex(n, mix_seed(seed, 2))};
}

void SuiteConfig::validate() const {
  if (trials < 1) throw ContractViolation("run_suite: trials must be at least 1");
  if (sizes.empty()) throw ContractViolation("run_suite: no sizes given");
  if (solvers.empty()) throw ContractViolation("run_suite: no solvers given");
  for (Index n : sizes)
    if (n < 2) throw ContractViolation("run_suite: sizes must be at least 2");
  const bool has_fp = std::find(solvers.begin(), solvers.end(), SolverId::FP) != solvers.end();
  if (has_fp && l_values.empty()) throw ContractViolation("run_suite: no L values given");
  for (double L : l_values)
    if (!(L > 0.0 && L < 1.0)) throw ContractViolation("run_suite: L must lie in (0, 1)");
  if (!(near_singular_fraction >= 0.0 && near_singular_fraction <= 1.0))
    throw ContractViolation("run_suite: near_singular_fraction must lie in [0, 1]");
}

SuiteResult run_suite(const SuiteConfig& cfg) {
  cfg.validate();

  struct Task {
    Index n;
    int trial;
  };
  std::vector<Task> tasks;
  for (Index n : cfg.sizes)
    for (int t = 0; t < cfg.trials; ++t) tasks.push_back({n, t});

  std::vector<std::vector<BenchmarkRecord>> slots(tasks.size());
  auto run_task = [&](std::size_t i) {
    const Task& task = tasks[i];
    const Instance inst = make_instance(cfg.master_seed, task.n,
                                        static_cast<std::uint64_t>(task.trial),
                                        cfg.near_singular_fraction);
    for (SolverId s : cfg.solvers) {
      if (s == SolverId::FP) {
        for (double L : cfg.l_values) {
          SolverSettings settings = cfg.settings;
          settings.L = L;
          slots[i].push_back(run_trial(inst.V, inst.start, inst.budget, s, settings));
          slots[i].back().seed = inst.seed;
        }
      } else {
        slots[i].push_back(run_trial(inst.V, inst.start, inst.budget, s, cfg.settings));
        slots[i].back().seed = inst.seed;
      }
    }
  };

  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(tasks.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) run_task(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) run_task(i);
      });
    }
    for (auto& th : pool) th.join();
  }

  SuiteResult result;
  for (auto& slot : slots)
    for (auto& rec : slot) result.records.push_back(std::move(rec));
  result.summary = summarize(result.records);
  return result;
}

std::vector<SummaryRow> summarize(const std::vector<BenchmarkRecord>& records) {
  using Key = std::tuple<Index, SolverId, double>;
  std::map<Key, std::vector<const BenchmarkRecord*>> groups;
  for (const auto& r : records) groups[{r.n, r.solver, r.L.value_or(-1.0)}].push_back(&r);

  std::vector<SummaryRow> rows;
  for (const auto& [key, recs] : groups) {
    SummaryRow row{std::get<1>(key), std::get<0>(key), recs.front()->L};
    row.trials = static_cast<int>(recs.size());
    std::vector<double> acc;
    for (const auto* r : recs) {
      row.converged += r->converged ? 1 : 0;
      row.mean_time_s += r->wall_time_seconds;
      row.mean_accuracy += r->accuracy;
      row.mean_iterations += r->iterations;
      acc.push_back(r->accuracy);
    }
    row.mean_time_s /= row.trials;
    row.mean_accuracy /= row.trials;
    row.mean_iterations /= row.trials;
    row.median_accuracy = median(std::move(acc));
    rows.push_back(row);
  }
  return rows;
}

void write_suite(const SuiteResult& result, const SuiteConfig& cfg,
                 const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create '" + dir.string() + "': " + ec.message());

  const auto records_path = dir / "records.csv";
  auto out = open_out(records_path);
  out << "solver,n,seed,L,time_s,accuracy,iterations,converged\n";
  for (const auto& r : result.records) {
    out << to_string(r.solver) << ',' << r.n << ',' << r.seed << ',' << l_field(r.L) << ','
        << fmt("%.9g", r.wall_time_seconds) << ',' << fmt("%.17g", r.accuracy) << ','
        << r.iterations << ',' << (r.converged ? "true" : "false") << '\n';
  }
  close_out(out, records_path);

  const auto summary_path = dir / "summary.csv";
  out = open_out(summary_path);
  out << "solver,L,n,trials,converged,mean_time_s,mean_accuracy,median_accuracy,"
         "mean_iterations\n";
  for (const auto& s : result.summary) {
    out << to_string(s.solver) << ',' << l_field(s.L) << ',' << s.n << ',' << s.trials << ','
        << s.converged << ',' << fmt("%.9g", s.mean_time_s) << ','
        << fmt("%.17g", s.mean_accuracy) << ',' << fmt("%.17g", s.median_accuracy) << ','
        << fmt("%.6g", s.mean_iterations) << '\n';
  }
  close_out(out, summary_path);

  nlohmann::json meta;
  meta["master_seed"] = cfg.master_seed;
  meta["sizes"] = cfg.sizes;
  meta["trials"] = cfg.trials;
  std::vector<std::string> solvers;
  for (SolverId s : cfg.solvers) solvers.emplace_back(to_string(s));
  meta["solvers"] = solvers;
  meta["l_values"] = cfg.l_values;
  meta["tol"] = cfg.settings.tol;
  meta["maxit"] = cfg.settings.maxit;
  meta["step_margin"] = cfg.settings.step_margin;
  meta["baseline_max_iterations"] = cfg.settings.baseline_max_iterations;
  meta["baseline_grad_tol"] = cfg.settings.baseline_grad_tol;
  meta["near_singular_fraction"] = cfg.near_singular_fraction;
  meta["generator"] = "mt19937_64, per-trial seed splitmix64(master, n, trial)";
  const auto meta_path = dir / "metadata.json";
  out = open_out(meta_path);
  out << meta.dump(2) << '\n';
  close_out(out, meta_path);
}

std::string format_table(const std::vector<SummaryRow>& rows) {
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof line, "%-6s %6s %5s %7s %9s %12s %12s %12s %10s\n", "solver",
                "L", "n", "trials", "converged", "mean_time_s", "mean_acc", "median_acc",
                "mean_iter");
  os << line;
  for (const auto& r : rows) {
    const std::string L = r.L ? fmt("%.4g", *r.L) : "-";
    std::snprintf(line, sizeof line, "%-6s %6s %5lld %7d %9d %12.4e %12.4e %12.4e %10.1f\n",
                  std::string(to_string(r.solver)).c_str(), L.c_str(),
                  static_cast<long long>(r.n), r.trials, r.converged, r.mean_time_s,
                  r.mean_accuracy, r.median_accuracy, r.mean_iterations);
    os << line;
  }
  return os.str();
}

}  // namespace riskfp
