#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cflp/benders.hpp"
#include "cflp/instance.hpp"
#include "cflp/oracle.hpp"
#include "cflp/rng.hpp"

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

}  // namespace

TEST_CASE("classic solves the single-cell instance") {
  SolveReport r = solve_classic(tiny_1x1());
  REQUIRE(r.status == SolveReport::Status::Optimal);
  CHECK(r.optimal_cost == doctest::Approx(16.0));
  CHECK(r.open_facilities == std::vector<int>{1});
  CHECK(r.iterations <= 2);
  CHECK(r.assignment[0] == doctest::Approx(1.0));
}

TEST_CASE("classic matches the oracle on a generated small instance") {
  Instance inst = generate_instance(5, 2, 42);
  SolveReport r = solve_classic(inst);
  REQUIRE(r.status == SolveReport::Status::Optimal);
  Solution want = solve_exhaustive(inst);
  CHECK(std::abs(r.optimal_cost - want.total_cost) <= 1e-6 * (1.0 + want.total_cost));
}

TEST_CASE("aggregate cut coefficients follow the dual") {
  Instance inst = tiny_1x1();
  SUBCASE("slack capacity gives a constant cut") {
    DualSolution d;
    d.kind = DualSolution::Kind::OptimalPoint;
    d.u = {6.0};
    d.v = {0.0};
    d.w = {0.0};
    Cut cut = build_aggregate_optimality_cut(d, inst);
    CHECK(cut.const_term == doctest::Approx(6.0));
    CHECK(cut.y_coeff[0] == doctest::Approx(0.0));
  }
  SUBCASE("capacity dual scales by the capacity") {
    Instance two = generate_instance(2, 1, 3);
    two.capacity = {2000.0};
    DualSolution d;
    d.kind = DualSolution::Kind::OptimalPoint;
    d.u = {1.0, 2.0};
    d.v = {0.0, 0.0};
    d.w = {0.5};
    Cut cut = build_aggregate_optimality_cut(d, two);
    CHECK(cut.const_term == doctest::Approx(3.0));
    CHECK(cut.y_coeff[0] == doctest::Approx(-1000.0).epsilon(1e-9));
  }
  SUBCASE("wrong dual kind is rejected") {
    DualSolution d;
    d.u = {1.0};
    d.v = {0.0};
    d.w = {0.0};
    d.kind = DualSolution::Kind::UnboundedRay;
    CHECK_THROWS_AS(build_aggregate_optimality_cut(d, inst), std::invalid_argument);
    d.kind = DualSolution::Kind::OptimalPoint;
    CHECK_THROWS_AS(build_feasibility_cut(d, inst), std::invalid_argument);
  }
}

TEST_CASE("canonical capacity ray produces the covering cut") {
  Instance inst = generate_instance(6, 3, 17);
  DualSolution ray;
  ray.kind = DualSolution::Kind::UnboundedRay;
  ray.u = inst.demand;
  ray.v.assign(18, 0.0);
  ray.w.assign(3, 1.0);
  Cut cut = build_feasibility_cut(ray, inst);
  // cut: sum d_i - sum_j s_j y_j <= 0, same predicate as capacity coverage
  for (std::uint32_t mask = 0; mask < 8; ++mask) {
    std::vector<int> y(3);
    double cap = 0.0;
    for (int j = 0; j < 3; ++j) {
      y[j] = (mask >> j) & 1;
      if (y[j]) cap += inst.capacity[j];
    }
    bool cut_ok = cut_value_at(cut, y) <= 1e-9 * (1.0 + cut.const_term);
    bool covered = cap >= inst.total_demand();
    CHECK(cut_ok == covered);
  }
}

TEST_CASE("engine feasibility cuts: violated by the source, valid elsewhere") {
  SplitMix64 rng(21);
  int rays_checked = 0;
  while (rays_checked < 15) {
    int n = 2 + static_cast<int>(rng.next() % 4);
    int m = 30 + static_cast<int>(rng.next() % 20);  // total demand beats one facility
    Instance inst = generate_instance(m, n, rng.next());

    std::vector<int> y_bar(n, 0);
    y_bar[rng.next() % static_cast<std::uint64_t>(n)] = 1;  // one facility cannot cover
    double cap = 0.0;
    for (int j = 0; j < n; ++j)
      if (y_bar[j]) cap += inst.capacity[j];
    if (cap >= inst.total_demand()) continue;

    auto sub = solve_subproblem(inst, y_bar);
    REQUIRE(sub.status == SubproblemResult::Status::Infeasible);
    Cut cut = build_feasibility_cut(sub.dual, inst);
    ++rays_checked;

    CHECK(cut_value_at(cut, y_bar) > 1e-9);  // cuts off its source
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      std::vector<int> y(n);
      double c = 0.0;
      for (int j = 0; j < n; ++j) {
        y[j] = (mask >> j) & 1;
        if (y[j]) c += inst.capacity[j];
      }
      if (c < inst.total_demand() || mask == 0) continue;  // subproblem infeasible
      CHECK(cut_value_at(cut, y) <= 1e-7 * (1.0 + std::abs(cut.const_term)));
    }
  }
}

TEST_CASE("optimality cuts are tight at the producing iterate") {
  Instance inst = generate_instance(7, 3, 1234);
  SolveOptions opts;
  std::vector<double> residuals;
  opts.observer = [&](const IterationEvent& ev) {
    if (!ev.subproblem_feasible) return;
    for (const Cut& cut : *ev.cuts_added) {
      if (cut.kind == Cut::Kind::Feasibility) continue;
      // aggregate mode: single cut, value at y equals the subproblem optimum
      residuals.push_back(std::abs(cut_value_at(cut, *ev.y) - ev.subproblem_cost));
    }
  };
  SolveReport r = solve_classic(inst, opts);
  REQUIRE(r.status == SolveReport::Status::Optimal);
  REQUIRE_FALSE(residuals.empty());
  for (double res : residuals) CHECK(res <= 1e-6);
}

TEST_CASE("trace bounds are monotone and sandwich the oracle optimum") {
  SplitMix64 rng(777);
  for (int trial = 0; trial < 10; ++trial) {
    int m = 3 + static_cast<int>(rng.next() % 8);
    int n = 2 + static_cast<int>(rng.next() % 5);
    Instance inst = generate_instance(m, n, rng.next());
    SolveReport r = solve_classic(inst);
    REQUIRE(r.status == SolveReport::Status::Optimal);
    double truth = solve_exhaustive(inst).total_cost;

    double prev_lb = -1.0, prev_ub = std::numeric_limits<double>::infinity();
    for (const auto& pt : r.trace) {
      CHECK(pt.lower_bound >= prev_lb);
      CHECK(pt.upper_bound <= prev_ub);
      prev_lb = pt.lower_bound;
      prev_ub = pt.upper_bound;
      CHECK(pt.lower_bound <= truth + 1e-6 * (1.0 + truth));
      if (std::isfinite(pt.upper_bound))
        CHECK(pt.upper_bound >= truth - 1e-6 * (1.0 + truth));
    }
    CHECK(r.trace.back().upper_bound - r.trace.back().lower_bound <=
          1e-6 * (1.0 + std::abs(r.trace.back().upper_bound)));
  }
}

TEST_CASE("no cut repeats while the gap is open") {
  SplitMix64 rng(3141);
  for (int trial = 0; trial < 6; ++trial) {
    Instance inst = generate_instance(6 + static_cast<int>(rng.next() % 6),
                                      3 + static_cast<int>(rng.next() % 4), rng.next());
    std::vector<Cut> seen;
    std::vector<bool> closed_after;
    SolveOptions opts;
    opts.observer = [&](const IterationEvent& ev) {
      for (const Cut& cut : *ev.cuts_added) seen.push_back(cut);
      closed_after.resize(seen.size(),
                          ev.upper_bound - ev.lower_bound <=
                              1e-6 * (1.0 + std::abs(ev.upper_bound)));
    };
    SolveReport r = solve_classic(inst, opts);
    REQUIRE(r.status == SolveReport::Status::Optimal);
    for (std::size_t a = 0; a < seen.size(); ++a)
      for (std::size_t b = a + 1; b < seen.size(); ++b) {
        if (closed_after[b]) continue;  // the final closing iteration may echo a cut
        bool same = seen[a].kind == seen[b].kind && seen[a].const_term == seen[b].const_term &&
                    seen[a].y_coeff == seen[b].y_coeff;
        CHECK_FALSE(same);
      }
  }
}

TEST_CASE("unsolvable instance is reported upfront") {
  Instance inst;
  inst.num_customers = 2;
  inst.num_facilities = 1;
  inst.fixed_cost = {10.0};
  inst.capacity = {5.0};
  inst.demand = {10.0, 10.0};
  inst.transport_cost = {1.0, 1.0};
  SolveReport r = solve_classic(inst);
  CHECK(r.status == SolveReport::Status::InfeasibleInstance);
  CHECK(std::isinf(r.optimal_cost));
}

TEST_CASE("iteration limit returns the best known bounds") {
  Instance inst = generate_instance(10, 6, 5005);
  SolveOptions opts;
  opts.max_iterations = 1;
  SolveReport r = solve_classic(inst, opts);
  CHECK(r.status == SolveReport::Status::IterationLimit);
  CHECK(r.iterations == 1);
  REQUIRE(r.trace.size() == 1);
  CHECK(std::isfinite(r.trace[0].upper_bound));  // all-open start bounds above
  CHECK(std::isfinite(r.optimal_cost));
}
