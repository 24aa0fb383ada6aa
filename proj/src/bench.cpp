#include "cflp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "cflp/accelerators.hpp"
#include "cflp/instance.hpp"

namespace cflp {

std::vector<BenchmarkCase> paper_suite(int repetitions, std::uint64_t base_seed) {
  std::vector<BenchmarkCase> suite = {
      {"case1", 5, 2, base_seed + 100, repetitions},
      {"case2", 10, 4, base_seed + 200, repetitions},
      {"case3", 50, 20, base_seed + 300, repetitions},
      {"case4", 70, 20, base_seed + 400, repetitions},
      {"case5", 70, 30, base_seed + 500, repetitions},
  };
  return suite;
}

std::vector<BenchmarkCase> read_suite_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open suite file " + path);
  std::vector<BenchmarkCase> suite;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    std::istringstream is(line);
    BenchmarkCase bc;
    if (!(is >> bc.name >> bc.num_customers >> bc.num_facilities >> bc.seed >> bc.repetitions) ||
        bc.num_customers < 1 || bc.num_facilities < 1 || bc.repetitions < 1)
      throw std::runtime_error("suite file line " + std::to_string(line_no) +
                               ": expected 'name m n seed repetitions'");
    suite.push_back(std::move(bc));
  }
  if (suite.empty()) throw std::runtime_error("suite file " + path + " defines no cases");
  return suite;
}

BenchReport run_benchmark(const std::vector<BenchmarkCase>& suite,
                          const std::vector<Algorithm>& algorithms, double epsilon,
                          long max_iterations, int jobs) {
  BenchReport report;
  for (const BenchmarkCase& bc : suite)
    for (int rep = 0; rep < bc.repetitions; ++rep)
      for (Algorithm alg : algorithms) {
        BenchCell cell;
        cell.case_name = bc.name;
        cell.m = bc.num_customers;
        cell.n = bc.num_facilities;
        cell.seed = bc.seed + static_cast<std::uint64_t>(rep);
        cell.algorithm = alg;
        report.cells.push_back(std::move(cell));
      }

  auto run_cell = [&](BenchCell& cell) {
    try {
      Instance inst = generate_instance(cell.m, cell.n, cell.seed);
      SolveOptions opts;
      opts.epsilon = epsilon;
      opts.max_iterations = max_iterations;
      cell.report = solve_with(cell.algorithm, inst, opts);
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
  };

  jobs = std::max(1, jobs);
  if (jobs == 1) {
    for (BenchCell& cell : report.cells) run_cell(cell);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      for (;;) {
        std::size_t k = next.fetch_add(1);
        if (k >= report.cells.size()) return;
        run_cell(report.cells[k]);
      }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // costs must agree across algorithms on the same instance
  std::map<std::pair<std::string, std::uint64_t>, std::vector<BenchCell*>> groups;
  for (BenchCell& cell : report.cells) groups[{cell.case_name, cell.seed}].push_back(&cell);
  for (auto& [key, cells] : groups) {
    double lo = lp::kInf, hi = -lp::kInf;
    for (BenchCell* c : cells) {
      if (!c->error.empty() || c->report.status != SolveReport::Status::Optimal) continue;
      lo = std::min(lo, c->report.optimal_cost);
      hi = std::max(hi, c->report.optimal_cost);
    }
    if (std::isfinite(lo) && hi - lo > 1e-6 * (1.0 + std::abs(hi))) {
      report.cost_mismatch = true;
      for (BenchCell* c : cells)
        if (c->error.empty()) c->error = "optimal cost disagrees across algorithms";
    }
  }
  return report;
}

namespace {

const char* status_name(SolveReport::Status s) {
  switch (s) {
    case SolveReport::Status::Optimal: return "optimal";
    case SolveReport::Status::IterationLimit: return "iteration-limit";
    case SolveReport::Status::InfeasibleInstance: return "infeasible-instance";
  }
  return "?";
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  std::size_t mid = v.size() / 2;
  if (v.size() % 2 == 1) return v[mid];
  return 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace

void write_bench_csv(const BenchReport& report, std::ostream& out) {
  out << "case,m,n,seed,algorithm,status,optimal_cost,iterations,wall_time_seconds\n";
  char buf[64];
  for (const BenchCell& cell : report.cells) {
    const char* status = !cell.error.empty() ? "error" : status_name(cell.report.status);
    double cost = !cell.error.empty() ? std::numeric_limits<double>::quiet_NaN()
                                      : cell.report.optimal_cost;
    std::snprintf(buf, sizeof buf, "%.17g", cost);
    out << cell.case_name << ',' << cell.m << ',' << cell.n << ',' << cell.seed << ','
        << algorithm_name(cell.algorithm) << ',' << status << ',' << buf << ','
        << cell.report.iterations << ',' << cell.report.wall_time_seconds << '\n';
  }
}

std::string format_bench_table(const BenchReport& report) {
  // group by (case, algorithm) preserving first-seen order
  std::vector<std::pair<std::string, Algorithm>> keys;
  std::map<std::pair<std::string, Algorithm>, std::vector<const BenchCell*>> groups;
  for (const BenchCell& cell : report.cells) {
    auto key = std::make_pair(cell.case_name, cell.algorithm);
    if (!groups.count(key)) keys.push_back(key);
    groups[key].push_back(&cell);
  }
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-8s %-8s %6s %6s %10s %12s %16s\n", "case", "algorithm", "m",
                "n", "med.iter", "med.time(s)", "median cost");
  os << line;
  for (auto& key : keys) {
    auto& cells = groups[key];
    std::vector<double> iters, times, costs;
    int errors = 0;
    for (const BenchCell* c : cells) {
      if (!c->error.empty()) { ++errors; continue; }
      iters.push_back(static_cast<double>(c->report.iterations));
      times.push_back(c->report.wall_time_seconds);
      if (c->report.status == SolveReport::Status::Optimal)
        costs.push_back(c->report.optimal_cost);
    }
    std::snprintf(line, sizeof line, "%-8s %-8s %6d %6d %10.1f %12.3f %16.2f%s\n",
                  key.first.c_str(), algorithm_name(key.second), cells.front()->m,
                  cells.front()->n, median(iters), median(times), median(costs),
                  errors ? "  [errors]" : "");
    os << line;
  }
  if (report.cost_mismatch) os << "WARNING: optimal costs disagree across algorithms\n";
  return os.str();
}

}  // namespace cflp
