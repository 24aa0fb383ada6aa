#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cflp/instance.hpp"
#include "cflp/lp.hpp"
#include "cflp/rng.hpp"
#include "cflp/subproblem.hpp"
#include "cflp/tableau_lp.hpp"

using namespace cflp;

namespace {

Instance tiny_1x1() {
  Instance inst;
  inst.num_customers = 1;
  inst.num_facilities = 1;
  inst.fixed_cost = {10.0};
  inst.capacity = {5.0};
  inst.demand = {3.0};
  inst.transport_cost = {2.0};
  return inst;
}

// Independent value of the assignment LP via the full-tableau solver.
double tableau_transport_cost(const Instance& inst, const std::vector<int>& y) {
  const int m = inst.num_customers;
  const int n = inst.num_facilities;
  lp::LinearProgram prog;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      prog.add_variable(inst.demand[i] * inst.cost(i, j), 0.0, y[j] ? 1.0 : 0.0);
  for (int i = 0; i < m; ++i) {
    std::vector<std::pair<int, double>> coeffs;
    for (int j = 0; j < n; ++j) coeffs.push_back({i * n + j, 1.0});
    prog.add_constraint(lp::Sense::GreaterEqual, 1.0, std::move(coeffs));
  }
  for (int j = 0; j < n; ++j) {
    std::vector<std::pair<int, double>> coeffs;
    for (int i = 0; i < m; ++i) coeffs.push_back({i * n + j, inst.demand[i]});
    prog.add_constraint(lp::Sense::LessEqual, y[j] ? inst.capacity[j] : 0.0, std::move(coeffs));
  }
  auto sol = lp::solve_lp_tableau(prog);
  REQUIRE(sol.status == lp::SolveStatus::Optimal);
  return sol.objective;
}

void check_dual_feasible(const Instance& inst, const DualSolution& d, bool homogeneous) {
  const int m = inst.num_customers;
  const int n = inst.num_facilities;
  for (int i = 0; i < m; ++i) {
    CHECK(d.u[i] >= -1e-9);
    for (int j = 0; j < n; ++j) {
      double rhs = homogeneous ? 0.0 : inst.demand[i] * inst.cost(i, j);
      double lhs = d.u[i] - d.v[static_cast<std::size_t>(i) * n + j] - inst.demand[i] * d.w[j];
      CHECK(lhs <= rhs + 1e-7 * (1.0 + std::abs(rhs)));
      CHECK(d.v[static_cast<std::size_t>(i) * n + j] >= -1e-9);
    }
  }
  for (int j = 0; j < n; ++j) CHECK(d.w[j] >= -1e-9);
}

}  // namespace

TEST_CASE("single customer, single open facility") {
  Instance inst = tiny_1x1();
  auto r = solve_subproblem(inst, {1});
  REQUIRE(r.status == SubproblemResult::Status::Feasible);
  CHECK(r.primal_x[0] == doctest::Approx(1.0));
  CHECK(r.transport_cost == doctest::Approx(6.0));
  CHECK(r.dual.u[0] == doctest::Approx(6.0));
  CHECK(r.dual.v[0] == doctest::Approx(0.0));
  CHECK(r.dual.w[0] == doctest::Approx(0.0));
}

TEST_CASE("no open facility is infeasible with a valid ray") {
  Instance inst = generate_instance(4, 3, 11);
  auto r = solve_subproblem(inst, {0, 0, 0});
  REQUIRE(r.status == SubproblemResult::Status::Infeasible);
  REQUIRE(r.dual.kind == DualSolution::Kind::UnboundedRay);
  check_dual_feasible(inst, r.dual, true);
  std::vector<double> y(3, 0.0);
  CHECK(r.dual.objective_at(inst, y) > 1e-9);  // positive value at the producing y
}

TEST_CASE("insufficient open capacity yields a certifying ray") {
  // two facilities, open one with capacity below total demand
  Instance inst;
  inst.num_customers = 3;
  inst.num_facilities = 2;
  inst.fixed_cost = {100.0, 100.0};
  inst.capacity = {10.0, 100.0};
  inst.demand = {5.0, 6.0, 7.0};
  inst.transport_cost = {1.0, 2.0, 3.0, 1.0, 2.0, 4.0};
  auto r = solve_subproblem(inst, {1, 0});
  REQUIRE(r.status == SubproblemResult::Status::Infeasible);
  check_dual_feasible(inst, r.dual, true);
  std::vector<double> y = {1.0, 0.0};
  CHECK(r.dual.objective_at(inst, y) > 1e-9);
  // the ray must not cut off the fully-open configuration
  std::vector<double> both = {1.0, 1.0};
  CHECK(r.dual.objective_at(inst, both) <= 1e-9);
}

TEST_CASE("binding capacity matches the independent reference") {
  // capacities force a split assignment
  Instance inst;
  inst.num_customers = 3;
  inst.num_facilities = 2;
  inst.fixed_cost = {10.0, 10.0};
  inst.capacity = {8.0, 9.0};
  inst.demand = {5.0, 6.0, 4.0};
  inst.transport_cost = {1.0, 3.0, 2.0, 1.0, 4.0, 2.0};
  std::vector<int> y = {1, 1};
  auto r = solve_subproblem(inst, y);
  REQUIRE(r.status == SubproblemResult::Status::Feasible);
  double ref = tableau_transport_cost(inst, y);
  CHECK(r.transport_cost == doctest::Approx(ref).epsilon(1e-9));
  // capacity binds, so some w must be active
  double wsum = r.dual.w[0] + r.dual.w[1];
  CHECK(wsum > 1e-9);
  check_dual_feasible(inst, r.dual, false);
}

TEST_CASE("strong duality and complementary slackness on random pairs") {
  SplitMix64 rng(4242);
  int tested = 0;
  while (tested < 200) {
    int m = 2 + static_cast<int>(rng.next() % 9);
    int n = 2 + static_cast<int>(rng.next() % 5);
    Instance inst = generate_instance(m, n, rng.next());
    std::vector<int> y(n);
    double cap = 0.0;
    for (int j = 0; j < n; ++j) {
      y[j] = rng.next() % 2;
      if (y[j]) cap += inst.capacity[j];
    }
    if (cap < inst.total_demand()) continue;
    ++tested;
    auto r = solve_subproblem(inst, y);
    REQUIRE(r.status == SubproblemResult::Status::Feasible);

    std::vector<double> yd(y.begin(), y.end());
    double dual_obj = r.dual.objective_at(inst, yd);
    CHECK(std::abs(r.transport_cost - dual_obj) <= 1e-7 * (1.0 + std::abs(r.transport_cost)));

    check_dual_feasible(inst, r.dual, false);
    // complementary slackness
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) {
        std::size_t k = static_cast<std::size_t>(i) * n + j;
        double x = r.primal_x[k];
        double slack = inst.demand[i] * inst.cost(i, j) - r.dual.u[i] + r.dual.v[k] +
                       inst.demand[i] * r.dual.w[j];
        CHECK(std::abs(x * slack) <= 1e-6);
        CHECK(std::abs(r.dual.v[k] * (y[j] - x)) <= 1e-6);
      }
    for (int j = 0; j < n; ++j) {
      double flow = 0.0;
      for (int i = 0; i < m; ++i)
        flow += inst.demand[i] * r.primal_x[static_cast<std::size_t>(i) * n + j];
      CHECK(std::abs(r.dual.w[j] * (inst.capacity[j] * y[j] - flow)) <= 1e-6);
    }
    // primal satisfies the assignment constraints
    for (int i = 0; i < m; ++i) {
      double row = 0.0;
      for (int j = 0; j < n; ++j) row += r.primal_x[static_cast<std::size_t>(i) * n + j];
      CHECK(row >= 1.0 - 1e-9);
    }
  }
}

TEST_CASE("weak duality: repaired random duals never exceed the true cost") {
  SplitMix64 rng(999);
  int tested = 0;
  while (tested < 100) {
    int m = 2 + static_cast<int>(rng.next() % 5);
    int n = 2 + static_cast<int>(rng.next() % 4);
    Instance inst = generate_instance(m, n, rng.next());
    std::vector<int> y(n, 1);

    // random nonnegative (u, w), v repaired to the smallest feasible value
    DualSolution d;
    d.kind = DualSolution::Kind::OptimalPoint;
    d.u.resize(m);
    d.w.resize(n);
    d.v.assign(static_cast<std::size_t>(m) * n, 0.0);
    for (int i = 0; i < m; ++i) d.u[i] = rng.next_open(0.0, 2000.0);
    for (int j = 0; j < n; ++j) d.w[j] = rng.next_open(0.0, 2.0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) {
        double need = d.u[i] - inst.demand[i] * d.w[j] - inst.demand[i] * inst.cost(i, j);
        d.v[static_cast<std::size_t>(i) * n + j] = std::max(0.0, need);
      }

    auto r = solve_subproblem(inst, y);
    REQUIRE(r.status == SubproblemResult::Status::Feasible);
    std::vector<double> yd(y.begin(), y.end());
    CHECK(d.objective_at(inst, yd) <=
          r.transport_cost + 1e-7 * (1.0 + std::abs(r.transport_cost)));
    ++tested;
  }
}

TEST_CASE("fractional levels: engine matches the reference on scaled systems") {
  SplitMix64 rng(808);
  for (int trial = 0; trial < 30; ++trial) {
    int m = 2 + static_cast<int>(rng.next() % 4);
    int n = 2 + static_cast<int>(rng.next() % 3);
    Instance inst = generate_instance(m, n, rng.next());
    std::vector<double> levels(n);
    for (int j = 0; j < n; ++j) levels[j] = rng.next_open(0.2, 1.5);
    double rho = rng.next_open(0.3, 1.0);

    auto r = solve_transport(inst, levels, rho);
    REQUIRE(r.status == SubproblemResult::Status::Feasible);

    lp::LinearProgram prog;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j)
        prog.add_variable(inst.demand[i] * inst.cost(i, j), 0.0, levels[j]);
    for (int i = 0; i < m; ++i) {
      std::vector<std::pair<int, double>> coeffs;
      for (int j = 0; j < n; ++j) coeffs.push_back({i * n + j, 1.0});
      prog.add_constraint(lp::Sense::GreaterEqual, rho, std::move(coeffs));
    }
    for (int j = 0; j < n; ++j) {
      std::vector<std::pair<int, double>> coeffs;
      for (int i = 0; i < m; ++i) coeffs.push_back({i * n + j, inst.demand[i]});
      prog.add_constraint(lp::Sense::LessEqual, inst.capacity[j] * levels[j], std::move(coeffs));
    }
    auto ref = lp::solve_lp_tableau(prog);
    REQUIRE(ref.status == lp::SolveStatus::Optimal);
    CHECK(r.transport_cost ==
          doctest::Approx(ref.objective).epsilon(1e-8).scale(1.0 + std::abs(ref.objective)));
  }
}
