#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "cflp/bench.hpp"
#include "cflp/instance.hpp"

using namespace cflp;

namespace {

const std::vector<Algorithm> kAll = {Algorithm::Classic, Algorithm::Pareto, Algorithm::LShaped,
                                     Algorithm::HybridPL};

// strips the wall_time_seconds column (the only legitimately varying field)
std::string stable_csv(const BenchReport& report) {
  std::ostringstream os;
  write_bench_csv(report, os);
  std::istringstream is(os.str());
  std::string line, out;
  while (std::getline(is, line)) {
    auto cut = line.rfind(',');
    out += line.substr(0, cut);
    out += '\n';
  }
  return out;
}

}  // namespace

TEST_CASE("single-cell case agrees across algorithms in at most 2 iterations") {
  std::vector<BenchmarkCase> suite = {{"unit", 1, 1, 77, 1}};
  BenchReport report = run_benchmark(suite, kAll, 1e-6, 100, 1);
  REQUIRE(report.cells.size() == 4);
  Instance inst = generate_instance(1, 1, 77);
  double want = inst.fixed_cost[0] + inst.demand[0] * inst.cost(0, 0);
  for (const BenchCell& cell : report.cells) {
    CHECK(cell.error.empty());
    CHECK(cell.report.status == SolveReport::Status::Optimal);
    CHECK(cell.report.optimal_cost == doctest::Approx(want));
    CHECK(cell.report.iterations <= 2);
  }
  CHECK_FALSE(report.cost_mismatch);
}

TEST_CASE("unsolvable case is isolated, the suite completes") {
  // m/n far beyond the solvable ratio: total demand > 3000 > any single capacity
  std::vector<BenchmarkCase> suite = {{"bad", 60, 1, 5, 1}, {"good", 4, 2, 6, 1}};
  BenchReport report = run_benchmark(suite, kAll, 1e-6, 100, 1);
  REQUIRE(report.cells.size() == 8);
  for (const BenchCell& cell : report.cells) {
    if (cell.case_name == "bad") {
      CHECK(cell.report.status == SolveReport::Status::InfeasibleInstance);
      CHECK(std::isinf(cell.report.optimal_cost));
    } else {
      CHECK(cell.report.status == SolveReport::Status::Optimal);
    }
  }
  std::ostringstream os;
  write_bench_csv(report, os);
  CHECK(os.str().find("infeasible-instance,inf") != std::string::npos);
}

TEST_CASE("parallel run produces the same report as sequential") {
  std::vector<BenchmarkCase> suite = {{"a", 6, 3, 10, 3}, {"b", 9, 4, 20, 3}};
  BenchReport seq = run_benchmark(suite, kAll, 1e-6, 200, 1);
  BenchReport par = run_benchmark(suite, kAll, 1e-6, 200, 4);
  CHECK(stable_csv(seq) == stable_csv(par));
}

TEST_CASE("repeated runs are identical except wall time") {
  std::vector<BenchmarkCase> suite = {{"a", 7, 3, 40, 2}};
  BenchReport r1 = run_benchmark(suite, kAll, 1e-6, 200, 2);
  BenchReport r2 = run_benchmark(suite, kAll, 1e-6, 200, 2);
  CHECK(stable_csv(r1) == stable_csv(r2));
}

TEST_CASE("csv costs parse back exactly") {
  std::vector<BenchmarkCase> suite = {{"a", 6, 3, 50, 2}};
  BenchReport report = run_benchmark(suite, kAll, 1e-6, 200, 1);
  std::ostringstream os;
  write_bench_csv(report, os);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);  // header
  std::size_t row = 0;
  while (std::getline(is, line)) {
    // optimal_cost is column 7
    std::istringstream ls(line);
    std::string field;
    for (int c = 0; c < 7; ++c) std::getline(ls, field, ',');
    double parsed = std::strtod(field.c_str(), nullptr);
    CHECK(parsed == report.cells[row].report.optimal_cost);
    ++row;
  }
  CHECK(row == report.cells.size());
}

TEST_CASE("suite file parsing") {
  SUBCASE("round trip") {
    std::string path = "/tmp/cflp_test_suite.txt";
    {
      std::ofstream f(path);
      f << "# comment\nalpha 5 2 100 3\nbeta 10 4 200 1\n";
    }
    auto suite = read_suite_file(path);
    REQUIRE(suite.size() == 2);
    CHECK(suite[0].name == "alpha");
    CHECK(suite[0].num_customers == 5);
    CHECK(suite[0].seed == 100);
    CHECK(suite[0].repetitions == 3);
    CHECK(suite[1].num_facilities == 4);
  }
  SUBCASE("malformed line throws") {
    std::string path = "/tmp/cflp_bad_suite.txt";
    {
      std::ofstream f(path);
      f << "alpha 5 2\n";
    }
    CHECK_THROWS_AS(read_suite_file(path), std::runtime_error);
  }
}

TEST_CASE("paper suite shape") {
  auto suite = paper_suite(5, 1000);
  REQUIRE(suite.size() == 5);
  CHECK(suite[0].num_customers == 5);
  CHECK(suite[0].num_facilities == 2);
  CHECK(suite[2].num_customers == 50);
  CHECK(suite[2].num_facilities == 20);
  CHECK(suite[4].num_customers == 70);
  CHECK(suite[4].num_facilities == 30);
  for (const auto& bc : suite) CHECK(bc.repetitions == 5);
}
