#include "cflp/benders.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "cflp/accelerators.hpp"
#include "cflp/util.hpp"

namespace cflp {

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::Classic: return "classic";
    case Algorithm::Pareto: return "pareto";
    case Algorithm::LShaped: return "lshaped";
    case Algorithm::HybridPL: return "hybrid";
  }
  return "?";
}

Cut build_aggregate_optimality_cut(const DualSolution& dual, const Instance& inst) {
  if (dual.kind != DualSolution::Kind::OptimalPoint)
    throw std::invalid_argument("optimality cut requires a dual point, not a ray");
  const int m = inst.num_customers;
  const int n = inst.num_facilities;
  const double total_demand = inst.total_demand();
  Cut cut;
  cut.kind = Cut::Kind::OptimalityAggregate;
  KahanSum c0;
  for (int i = 0; i < m; ++i) c0.add(dual.u[i]);
  cut.const_term = c0.value();
  cut.y_coeff.assign(n, 0.0);
  // y coefficient -sum_i v_ij - s_j w_j, accumulated through the same
  // per-customer shares the disaggregated form emits so the two agree to the
  // last bit whenever the shares are exact
  for (int j = 0; j < n; ++j) {
    KahanSum cj;
    double cap_term = inst.capacity[j] * dual.w[j];
    for (int i = 0; i < m; ++i)
      cj.add(dual.v[static_cast<std::size_t>(i) * n + j] +
             (inst.demand[i] / total_demand) * cap_term);
    cut.y_coeff[j] = -cj.value();
  }
  return cut;
}

Cut build_feasibility_cut(const DualSolution& ray, const Instance& inst) {
  if (ray.kind != DualSolution::Kind::UnboundedRay)
    throw std::invalid_argument("feasibility cut requires a dual ray");
  const int m = inst.num_customers;
  const int n = inst.num_facilities;
  Cut cut;
  cut.kind = Cut::Kind::Feasibility;
  KahanSum c0;
  for (int i = 0; i < m; ++i) c0.add(ray.u[i]);
  cut.const_term = c0.value();
  cut.y_coeff.assign(n, 0.0);
  for (int j = 0; j < n; ++j) {
    KahanSum cj;
    for (int i = 0; i < m; ++i) cj.add(ray.v[static_cast<std::size_t>(i) * n + j]);
    cj.add(inst.capacity[j] * ray.w[j]);
    cut.y_coeff[j] = -cj.value();
  }
  return cut;
}

SolveReport solve_classic(const Instance& inst, const SolveOptions& options) {
  return detail::run_benders(inst, Algorithm::Classic, options);
}

namespace detail {

SolveReport run_benders(const Instance& inst, Algorithm algorithm, const SolveOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  const int m = inst.num_customers;
  const int n = inst.num_facilities;

  SolveReport report;
  report.algorithm = algorithm;
  auto finish = [&](SolveReport::Status status) {
    report.status = status;
    report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
  };

  ValidationResult valid = validate_instance(inst);
  if (!valid.ok()) {
    for (const Violation& v : valid.violations)
      if (v.kind != Violation::Kind::InsufficientCapacity)
        throw std::invalid_argument("malformed instance: " + v.message);
    report.open_facilities.assign(n, 0);
    report.optimal_cost = lp::kInf;
    return finish(SolveReport::Status::InfeasibleInstance);
  }

  const bool use_pareto = algorithm == Algorithm::Pareto || algorithm == Algorithm::HybridPL;
  const bool multi_cut = algorithm == Algorithm::LShaped || algorithm == Algorithm::HybridPL;

  MasterProblem master(inst, multi_cut ? MasterMode::Disaggregated : MasterMode::Aggregate);
  CorePoint core = initial_core_point(n);

  std::vector<int> y(n, 1);  // always subproblem-feasible for a solvable instance
  std::vector<int> best_y;
  double ub = lp::kInf;
  double lb = 0.0;

  for (long iter = 1; iter <= options.max_iterations; ++iter) {
    SubproblemResult sub = solve_subproblem(inst, y);

    std::vector<Cut> cuts;
    DualSolution pareto_dual;
    const DualSolution* cut_dual = &sub.dual;
    bool used_core = false;

    if (sub.status == SubproblemResult::Status::Feasible) {
      KahanSum total;
      for (int j = 0; j < n; ++j)
        if (y[j]) total.add(inst.fixed_cost[j]);
      total.add(sub.transport_cost);
      if (total.value() < ub) {
        ub = total.value();
        best_y = y;
      }
      if (use_pareto) {
        pareto_dual = pareto_cut(inst, y, core, sub.transport_cost, &sub.dual);
        cut_dual = &pareto_dual;
        used_core = true;
      }
      if (multi_cut) {
        cuts = disaggregate_cut(*cut_dual, inst);
        // When capacity duals meet facilities smaller than the total demand,
        // the per-customer shares are widened for validity and no longer sum
        // to the aggregate cut; the aggregate then enters as a coupling row
        // over the epigraph sum so the relaxation stays tight at y.
        Cut agg = build_aggregate_optimality_cut(*cut_dual, inst);
        KahanSum cs;
        for (const Cut& c : cuts) cs.add(c.const_term);
        bool implied = std::abs(cs.value() - agg.const_term) <=
                       1e-9 * (1.0 + std::abs(agg.const_term));
        for (int j = 0; j < n && implied; ++j) {
          KahanSum sj;
          for (const Cut& c : cuts) sj.add(c.y_coeff[j]);
          implied = std::abs(sj.value() - agg.y_coeff[j]) <=
                    1e-9 * (1.0 + std::abs(agg.y_coeff[j]));
        }
        if (!implied) cuts.push_back(std::move(agg));
      } else {
        cuts.push_back(build_aggregate_optimality_cut(*cut_dual, inst));
      }
    } else {
      cuts.push_back(build_feasibility_cut(sub.dual, inst));
    }

    for (const Cut& cut : cuts) master.add_cut(cut);
    MasterProblem::Result mres = master.solve();
    if (!mres.feasible) {
      report.open_facilities.assign(n, 0);
      report.optimal_cost = lp::kInf;
      report.iterations = iter;
      return finish(SolveReport::Status::InfeasibleInstance);
    }
    lb = std::max(lb, mres.objective);
    report.trace.push_back({iter, lb, ub});
    report.iterations = iter;

    if (options.observer) {
      IterationEvent ev;
      ev.iteration = iter;
      ev.y = &y;
      ev.subproblem_feasible = sub.status == SubproblemResult::Status::Feasible;
      ev.subproblem_cost = sub.transport_cost;
      ev.plain_dual = &sub.dual;
      ev.cut_dual = cut_dual;
      ev.core_point = used_core ? &core.y : nullptr;
      ev.cuts_added = &cuts;
      ev.lower_bound = lb;
      ev.upper_bound = ub;
      options.observer(ev);
    }
    if (use_pareto && sub.status == SubproblemResult::Status::Feasible)
      core = update_core_point(core, y);

    if (std::isfinite(ub) && ub - lb <= options.epsilon * (1.0 + std::abs(ub))) {
      report.status = SolveReport::Status::Optimal;
      break;
    }
    y = mres.y;
    report.status = SolveReport::Status::IterationLimit;
  }
  if (report.trace.empty()) report.status = SolveReport::Status::IterationLimit;

  // recover the assignment at the incumbent
  if (!best_y.empty()) {
    SubproblemResult at_best = solve_subproblem(inst, best_y);
    report.open_facilities = best_y;
    report.assignment = at_best.primal_x;
    KahanSum total;
    for (int j = 0; j < n; ++j)
      if (best_y[j]) total.add(inst.fixed_cost[j]);
    total.add(at_best.transport_cost);
    report.optimal_cost = total.value();
  } else {
    report.open_facilities.assign(n, 0);
    report.optimal_cost = lp::kInf;
  }
  (void)m;
  return finish(report.status);
}

}  // namespace detail

}  // namespace cflp
