#pragma once

#include <vector>

#include "cflp/benders.hpp"
#include "cflp/instance.hpp"
#include "cflp/master.hpp"
#include "cflp/subproblem.hpp"

namespace cflp {

// A point in the open unit hypercube used to select among alternate dual
// optima; kept strictly interior so cut-selection stays well posed.
struct CorePoint {
  std::vector<double> y;  // every component in (0, 1)
};

CorePoint initial_core_point(int num_facilities);  // all components 0.5

// Halve toward the latest iterate, then clamp into [0.01, 0.99].
CorePoint update_core_point(const CorePoint& core, const std::vector<int>& y_bar);

// Strongest optimality cut at the core point among the duals that remain
// optimal for the subproblem at y_bar: maximizes the dual objective at
// core subject to dual feasibility and objective(y_bar) = subproblem_opt
// (within 1e-7 relative). Solved through the parametric dual of that
// selection problem, a one-dimensional family of assignment subproblems at
// opening levels core - lambda * y_bar; when no pinned maximizer exists the
// plain subproblem dual is returned unchanged.
//
// `plain` optionally supplies the already-computed dual at y_bar so the
// fallback avoids a re-solve.
DualSolution pareto_cut(const Instance& inst, const std::vector<int>& y_bar,
                        const CorePoint& core, double subproblem_opt,
                        const DualSolution* plain = nullptr);

// Splits a dual point into one cut per customer: customer i keeps its own
// u_i and v_i* terms and a demand-proportional share d_i / sum(d) of each
// capacity term. Summed over customers the pieces reproduce the aggregate
// cut coefficient for coefficient.
std::vector<Cut> disaggregate_cut(const DualSolution& dual, const Instance& inst);

// Same contract as solve_classic. Pareto replaces each cut-producing dual
// with the pareto_cut selection; the multi-cut variant runs the master
// disaggregated and adds one cut per customer each iteration; the hybrid
// does both.
SolveReport solve_pareto(const Instance& inst, const SolveOptions& options = {});
SolveReport solve_lshaped(const Instance& inst, const SolveOptions& options = {});
SolveReport solve_hybrid_pl(const Instance& inst, const SolveOptions& options = {});

SolveReport solve_with(Algorithm algorithm, const Instance& inst,
                       const SolveOptions& options = {});

}  // namespace cflp
