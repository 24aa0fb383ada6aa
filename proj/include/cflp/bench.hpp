#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cflp/benders.hpp"

namespace cflp {

struct BenchmarkCase {
  std::string name;
  int num_customers = 0;
  int num_facilities = 0;
  std::uint64_t seed = 0;
  int repetitions = 1;  // repetition r runs on seed + r
};

// The five stock sizes: (5,2), (10,4), (50,20), (70,20), (70,30).
std::vector<BenchmarkCase> paper_suite(int repetitions, std::uint64_t base_seed);

// Suite file: one case per line, "name m n seed repetitions",
// '#' starts a comment line.
std::vector<BenchmarkCase> read_suite_file(const std::string& path);

struct BenchCell {
  std::string case_name;
  int m = 0, n = 0;
  std::uint64_t seed = 0;
  Algorithm algorithm = Algorithm::Classic;
  SolveReport report;
  std::string error;  // nonempty when the solver failed or costs disagreed
};

struct BenchReport {
  std::vector<BenchCell> cells;  // ordered by case, repetition, algorithm
  bool cost_mismatch = false;
};

// Runs every (case, repetition, algorithm) cell, optionally on several
// threads; cells are independent and the assembled report does not depend
// on the schedule. Solver errors are recorded per cell. Costs of different
// algorithms on the same instance must agree to 1e-6 relative; offending
// cells are flagged and cost_mismatch is set.
BenchReport run_benchmark(const std::vector<BenchmarkCase>& suite,
                          const std::vector<Algorithm>& algorithms, double epsilon,
                          long max_iterations, int jobs);

// columns: case,m,n,seed,algorithm,status,optimal_cost,iterations,wall_time_seconds
void write_bench_csv(const BenchReport& report, std::ostream& out);

// Per-(case, algorithm) medians over repetitions, human readable.
std::string format_bench_table(const BenchReport& report);

}  // namespace cflp
