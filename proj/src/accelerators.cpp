#include "cflp/accelerators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cflp/util.hpp"

namespace cflp {

CorePoint initial_core_point(int num_facilities) {
  return {std::vector<double>(static_cast<std::size_t>(num_facilities), 0.5)};
}

CorePoint update_core_point(const CorePoint& core, const std::vector<int>& y_bar) {
  CorePoint next = core;
  for (std::size_t j = 0; j < next.y.size(); ++j) {
    double v = 0.5 * core.y[j] + 0.5 * y_bar[j];
    next.y[j] = std::clamp(v, 0.01, 0.99);
  }
  return next;
}

DualSolution pareto_cut(const Instance& inst, const std::vector<int>& y_bar,
                        const CorePoint& core, double subproblem_opt,
                        const DualSolution* plain) {
  const int n = inst.num_facilities;
  const double pin_tol = 0.5e-7 * (1.0 + std::abs(subproblem_opt));
  std::vector<double> y_bar_d(y_bar.begin(), y_bar.end());

  // The selection problem maximizes the dual objective at the core point over
  // duals pinned to the subproblem optimum at y_bar. Its LP dual is a family
  // of assignment subproblems at opening levels core - lambda * y_bar with
  // demand rhs 1 - lambda, convex in the scalar lambda; any lambda whose
  // subproblem dual is pinned at y_bar attains the selection optimum. Walk
  // lambda leftward until the pin holds.
  // The walk can only terminate if the inner problems become feasible as
  // lambda decreases; with a single open facility that requires the core
  // components to sum to at least the demand rhs slope.
  int open_count = 0;
  double core_sum = 0.0;
  for (int j = 0; j < n; ++j) {
    open_count += y_bar[j];
    core_sum += core.y[j];
  }
  bool searchable = open_count >= 2 || core_sum >= 1.0;

  double lambda = 0.0;
  for (int step = 0; searchable && step < 21; ++step) {
    std::vector<double> levels(n);
    for (int j = 0; j < n; ++j) levels[j] = core.y[j] - lambda * y_bar[j];
    SubproblemResult inner = solve_transport(inst, levels, 1.0 - lambda);
    if (inner.status == SubproblemResult::Status::Feasible) {
      double at_y_bar = inner.dual.objective_at(inst, y_bar_d);
      if (at_y_bar >= subproblem_opt - pin_tol) {
        DualSolution selected = inner.dual;
        selected.kind = DualSolution::Kind::OptimalPoint;
        selected.objective = at_y_bar;
        return selected;
      }
    }
    lambda = 2.0 * lambda - 1.0;
  }

  // No pinned maximizer within reach (the selection problem is unbounded for
  // this core point); the plain optimal dual is a valid, exactly pinned pick.
  if (plain) return *plain;
  return solve_subproblem(inst, y_bar).dual;
}

std::vector<Cut> disaggregate_cut(const DualSolution& dual, const Instance& inst) {
  if (dual.kind != DualSolution::Kind::OptimalPoint)
    throw std::invalid_argument("disaggregation requires a dual point, not a ray");
  const int m = inst.num_customers;
  const int n = inst.num_facilities;
  const double total_demand = inst.total_demand();

  // Customer i's capacity share is alpha_i * s_j * w_j, with s_j widened to
  // at least the total demand. The widening is what keeps each cut valid on
  // its own: theta_i must stay below customer i's true serving cost at EVERY
  // y (cuts from different iterations mix freely in the master), and
  // d_i c_ij >= u_i - v_ij - d_i w_j only supports a capacity charge of
  // d_i w_j = alpha_i * D * w_j per customer. When s_j >= D (every facility
  // can hold all demand) the share reduces to the plain alpha_i s_j w_j and
  // the m cuts sum to the aggregate cut coefficient for coefficient.
  std::vector<double> capacity_term(n);
  for (int j = 0; j < n; ++j)
    capacity_term[j] = std::max(inst.capacity[j], total_demand) * dual.w[j];

  std::vector<Cut> cuts(m);
  for (int i = 0; i < m; ++i) {
    Cut& cut = cuts[i];
    cut.kind = Cut::Kind::OptimalityDisaggregated;
    cut.theta_index = i;
    cut.const_term = dual.u[i];
    cut.y_coeff.assign(n, 0.0);
    double alpha = inst.demand[i] / total_demand;
    for (int j = 0; j < n; ++j)
      cut.y_coeff[j] = -(dual.v[static_cast<std::size_t>(i) * n + j] + alpha * capacity_term[j]);
  }
  return cuts;
}

SolveReport solve_pareto(const Instance& inst, const SolveOptions& options) {
  return detail::run_benders(inst, Algorithm::Pareto, options);
}

SolveReport solve_lshaped(const Instance& inst, const SolveOptions& options) {
  return detail::run_benders(inst, Algorithm::LShaped, options);
}

SolveReport solve_hybrid_pl(const Instance& inst, const SolveOptions& options) {
  return detail::run_benders(inst, Algorithm::HybridPL, options);
}

SolveReport solve_with(Algorithm algorithm, const Instance& inst, const SolveOptions& options) {
  return detail::run_benders(inst, algorithm, options);
}

}  // namespace cflp
