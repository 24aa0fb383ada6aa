#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cflp/instance.hpp"
#include "cflp/oracle.hpp"
#include "cflp/rng.hpp"

using namespace cflp;

TEST_CASE("single-cell instance") {
  Instance inst;
  inst.num_customers = 1;
  inst.num_facilities = 1;
  inst.fixed_cost = {10.0};
  inst.capacity = {5.0};
  inst.demand = {3.0};
  inst.transport_cost = {2.0};
  Solution s = solve_exhaustive(inst);
  CHECK(s.total_cost == doctest::Approx(16.0));
  CHECK(s.open == std::vector<int>{1});
  CHECK(s.assignment[0] == doctest::Approx(1.0));
}

TEST_CASE("picks the cheaper sufficient subset") {
  Instance inst;
  inst.num_customers = 2;
  inst.num_facilities = 2;
  inst.fixed_cost = {5.0, 50.0};
  inst.capacity = {100.0, 100.0};
  inst.demand = {10.0, 10.0};
  inst.transport_cost = {1.0, 1.0, 1.0, 1.0};
  Solution s = solve_exhaustive(inst);
  CHECK(s.open == std::vector<int>{1, 0});
  CHECK(s.total_cost == doctest::Approx(5.0 + 20.0));
}

TEST_CASE("duplicate free column never raises the optimum") {
  SplitMix64 rng(3030);
  for (int trial = 0; trial < 10; ++trial) {
    Instance inst = generate_instance(5, 3, rng.next());
    double base = solve_exhaustive(inst).total_cost;

    Instance ext = inst;
    ext.num_facilities = 4;
    ext.fixed_cost.push_back(0.0);
    ext.capacity.push_back(inst.capacity[1]);
    std::vector<double> costs;
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 3; ++j) costs.push_back(inst.cost(i, j));
      costs.push_back(inst.cost(i, 1));
    }
    ext.transport_cost = std::move(costs);
    double extended = solve_exhaustive(ext).total_cost;
    CHECK(extended <= base + 1e-9 * (1.0 + base));
  }
}

TEST_CASE("scaling all costs scales the optimum and keeps the argmin") {
  SplitMix64 rng(4040);
  for (double lambda : {2.0, 3.7}) {
    Instance inst = generate_instance(6, 4, rng.next());
    Solution base = solve_exhaustive(inst);
    Instance scaled = inst;
    for (double& f : scaled.fixed_cost) f *= lambda;
    for (double& c : scaled.transport_cost) c *= lambda;
    Solution s = solve_exhaustive(scaled);
    CHECK(s.total_cost ==
          doctest::Approx(lambda * base.total_cost).epsilon(1e-9).scale(base.total_cost));
    CHECK(s.open == base.open);
  }
}

TEST_CASE("cross-validation mode agrees with the engine-backed mode") {
  SplitMix64 rng(5050);
  for (int trial = 0; trial < 8; ++trial) {
    int m = 2 + static_cast<int>(rng.next() % 5);
    int n = 2 + static_cast<int>(rng.next() % 3);
    Instance inst = generate_instance(m, n, rng.next());
    Solution a = solve_exhaustive(inst, {15, false});
    Solution b = solve_exhaustive(inst, {15, true});
    CHECK(a.total_cost == doctest::Approx(b.total_cost).epsilon(1e-8).scale(a.total_cost));
    CHECK(a.open == b.open);
  }
}

TEST_CASE("oracle solution satisfies the model constraints") {
  Instance inst = generate_instance(8, 4, 60);
  Solution s = solve_exhaustive(inst);
  const int m = inst.num_customers, n = inst.num_facilities;
  for (int i = 0; i < m; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) {
      double x = s.assignment[static_cast<std::size_t>(i) * n + j];
      CHECK(x >= -1e-9);
      if (x > 1e-9) CHECK(s.open[j] == 1);
      row += x;
    }
    CHECK(row == doctest::Approx(1.0));
  }
  for (int j = 0; j < n; ++j) {
    double flow = 0.0;
    for (int i = 0; i < m; ++i) flow += inst.demand[i] * s.assignment[i * n + j];
    CHECK(flow <= inst.capacity[j] * s.open[j] + 1e-7);
  }
  CHECK(s.total_cost == doctest::Approx(solution_cost(inst, s.open, s.assignment)));
}

TEST_CASE("errors: facility cap and unsolvable instance") {
  Instance big = generate_instance(2, 16, 1);
  CHECK_THROWS_AS(solve_exhaustive(big), OracleError);

  Instance bad;
  bad.num_customers = 2;
  bad.num_facilities = 1;
  bad.fixed_cost = {1.0};
  bad.capacity = {5.0};
  bad.demand = {10.0, 10.0};
  bad.transport_cost = {1.0, 1.0};
  CHECK_THROWS_AS(solve_exhaustive(bad), OracleError);
}
