#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cflp/accelerators.hpp"
#include "cflp/bench.hpp"
#include "cflp/benders.hpp"
#include "cflp/instance.hpp"
#include "cflp/oracle.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitMismatch = 4;

cflp::Algorithm parse_algorithm(const std::string& name) {
  if (name == "classic") return cflp::Algorithm::Classic;
  if (name == "pareto") return cflp::Algorithm::Pareto;
  if (name == "lshaped") return cflp::Algorithm::LShaped;
  if (name == "hybrid") return cflp::Algorithm::HybridPL;
  throw CLI::ValidationError("--algorithm", "unknown algorithm '" + name + "'");
}

const char* status_name(cflp::SolveReport::Status s) {
  switch (s) {
    case cflp::SolveReport::Status::Optimal: return "optimal";
    case cflp::SolveReport::Status::IterationLimit: return "iteration-limit";
    case cflp::SolveReport::Status::InfeasibleInstance: return "infeasible-instance";
  }
  return "?";
}

void print_report(const cflp::Instance& inst, const cflp::SolveReport& r) {
  std::printf("algorithm:     %s\n", cflp::algorithm_name(r.algorithm));
  std::printf("status:        %s\n", status_name(r.status));
  std::printf("optimal cost:  %.2f\n", r.optimal_cost);
  std::printf("iterations:    %ld\n", r.iterations);
  std::printf("wall time:     %.3fs\n", r.wall_time_seconds);
  if (!r.trace.empty()) {
    std::printf("final bounds:  LB=%.4f UB=%.4f\n", r.trace.back().lower_bound,
                r.trace.back().upper_bound);
  }
  std::printf("open:         ");
  for (int j = 0; j < inst.num_facilities; ++j)
    if (r.open_facilities[j]) std::printf(" %d", j);
  std::printf("\n");
}

int run_generate(int m, int n, std::uint64_t seed, const std::string& out_path) {
  cflp::Instance inst = cflp::generate_instance(m, n, seed);
  cflp::write_instance_file(inst, out_path);
  auto check = cflp::validate_instance(inst);
  std::printf("wrote %s (m=%d n=%d seed=%llu)%s\n", out_path.c_str(), m, n,
              static_cast<unsigned long long>(seed),
              check.ok() ? "" : " [warning: instance fails validation]");
  for (const auto& v : check.violations) std::printf("  violation: %s\n", v.message.c_str());
  return 0;
}

int run_solve(const std::string& instance_path, const std::string& algorithm, double epsilon,
              long max_iters, bool certify, const std::string& trace_path) {
  cflp::Instance inst = cflp::read_instance_file(instance_path);
  cflp::SolveOptions opts;
  opts.epsilon = epsilon;
  opts.max_iterations = max_iters;
  cflp::SolveReport r = cflp::solve_with(parse_algorithm(algorithm), inst, opts);
  print_report(inst, r);

  if (!trace_path.empty()) {
    std::ofstream tf(trace_path);
    if (!tf) {
      std::fprintf(stderr, "error: cannot write trace to %s\n", trace_path.c_str());
      return kExitUsage;
    }
    tf << "iteration,lower_bound,upper_bound\n";
    char buf[128];
    for (const auto& pt : r.trace) {
      std::snprintf(buf, sizeof buf, "%ld,%.17g,%.17g\n", pt.iteration, pt.lower_bound,
                    pt.upper_bound);
      tf << buf;
    }
  }

  if (r.status == cflp::SolveReport::Status::InfeasibleInstance) return kExitInfeasible;

  if (certify) {
    cflp::Solution truth = cflp::solve_exhaustive(inst);
    double diff = std::abs(truth.total_cost - r.optimal_cost);
    std::printf("oracle cost:   %.2f (|diff| = %.3g)\n", truth.total_cost, diff);
    if (r.status != cflp::SolveReport::Status::Optimal ||
        diff > 1e-6 * (1.0 + std::abs(truth.total_cost))) {
      std::fprintf(stderr, "certification FAILED\n");
      return kExitMismatch;
    }
    std::printf("certification: ok\n");
  }
  return 0;
}

int run_bench(const std::string& suite_name, int reps, bool reps_given, int jobs,
              const std::string& csv_path, double epsilon, long max_iters,
              std::uint64_t base_seed) {
  std::vector<cflp::BenchmarkCase> suite;
  if (suite_name == "paper") suite = cflp::paper_suite(reps, base_seed);
  else {
    suite = cflp::read_suite_file(suite_name);
    if (reps_given)
      for (auto& bc : suite) bc.repetitions = reps;
  }
  std::vector<cflp::Algorithm> algs = {cflp::Algorithm::Classic, cflp::Algorithm::Pareto,
                                       cflp::Algorithm::LShaped, cflp::Algorithm::HybridPL};
  cflp::BenchReport report = cflp::run_benchmark(suite, algs, epsilon, max_iters, jobs);
  std::printf("%s", cflp::format_bench_table(report).c_str());
  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    if (!out) {
      std::fprintf(stderr, "error: cannot write %s\n", csv_path.c_str());
      return kExitUsage;
    }
    cflp::write_bench_csv(report, out);
  }
  if (report.cost_mismatch) return kExitMismatch;
  for (const auto& cell : report.cells)
    if (!cell.error.empty()) return kExitNumerical;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"capacitated facility location solver (Benders decomposition)"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "write a random instance file");
  int gen_m = 0, gen_n = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("-m", gen_m, "number of customers")->required()->check(CLI::PositiveNumber);
  gen->add_option("-n", gen_n, "number of facilities")->required()->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed, "generator seed")->required();
  gen->add_option("-o,--output", gen_out, "output path")->required();

  // solve
  auto* solve = app.add_subcommand("solve", "solve one instance");
  std::string solve_alg = "classic", solve_instance, solve_trace;
  double solve_eps = 1e-6;
  long solve_iters = 10000;
  bool solve_certify = false;
  solve->add_option("--algorithm", solve_alg, "classic|pareto|lshaped|hybrid")
      ->check(CLI::IsMember({"classic", "pareto", "lshaped", "hybrid"}));
  solve->add_option("--instance", solve_instance, "instance file")->required();
  solve->add_option("--epsilon", solve_eps, "relative optimality gap");
  solve->add_option("--max-iters", solve_iters, "iteration cap")->check(CLI::PositiveNumber);
  solve->add_flag("--certify", solve_certify, "check the answer against exhaustive enumeration");
  solve->add_option("--trace", solve_trace, "write per-iteration bounds CSV here");

  // bench
  auto* bench = app.add_subcommand("bench", "run a benchmark suite");
  std::string bench_suite = "paper", bench_csv;
  int bench_reps = 5, bench_jobs = 1;
  double bench_eps = 1e-6;
  long bench_iters = 10000;
  std::uint64_t bench_seed = 20240000;
  bench->add_option("--suite", bench_suite, "'paper' or a suite file path");
  bench->add_option("--reps", bench_reps, "repetitions per case")->check(CLI::PositiveNumber);
  bench->add_option("--jobs", bench_jobs, "parallel workers")->check(CLI::PositiveNumber);
  bench->add_option("--csv", bench_csv, "write per-cell results CSV here");
  bench->add_option("--epsilon", bench_eps, "relative optimality gap");
  bench->add_option("--max-iters", bench_iters, "iteration cap")->check(CLI::PositiveNumber);
  bench->add_option("--base-seed", bench_seed, "base seed for the paper suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (gen->parsed()) return run_generate(gen_m, gen_n, gen_seed, gen_out);
    if (solve->parsed())
      return run_solve(solve_instance, solve_alg, solve_eps, solve_iters, solve_certify,
                       solve_trace);
    if (bench->parsed())
      return run_bench(bench_suite, bench_reps, bench->count("--reps") > 0, bench_jobs,
                       bench_csv, bench_eps, bench_iters, bench_seed);
  } catch (const cflp::ParseError& e) {
    std::fprintf(stderr, "error: %s: %s\n", solve_instance.c_str(), e.what());
    return kExitUsage;
  } catch (const cflp::OracleError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.kind() == cflp::OracleError::Kind::InfeasibleInstance ? kExitInfeasible
                                                                   : kExitUsage;
  } catch (const cflp::NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
