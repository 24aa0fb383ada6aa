#pragma once

#include <functional>
#include <vector>

#include "cflp/instance.hpp"
#include "cflp/master.hpp"
#include "cflp/subproblem.hpp"

namespace cflp {

enum class Algorithm { Classic, Pareto, LShaped, HybridPL };

const char* algorithm_name(Algorithm a);

// Snapshot of one Benders iteration, fired after the master re-solve.
// Pointers remain valid only during the callback.
struct IterationEvent {
  long iteration = 0;
  const std::vector<int>* y = nullptr;             // iterate given to the subproblem
  bool subproblem_feasible = false;
  double subproblem_cost = 0.0;                    // transport optimum when feasible
  const DualSolution* plain_dual = nullptr;        // engine dual (point or ray)
  const DualSolution* cut_dual = nullptr;          // dual the cuts were built from
  const std::vector<double>* core_point = nullptr; // core used this iteration, if any
  const std::vector<Cut>* cuts_added = nullptr;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
};

struct SolveOptions {
  double epsilon = 1e-6;         // relative gap: UB - LB <= epsilon * (1 + |UB|)
  long max_iterations = 10000;
  std::function<void(const IterationEvent&)> observer;
};

struct SolveReport {
  enum class Status { Optimal, IterationLimit, InfeasibleInstance };

  Algorithm algorithm = Algorithm::Classic;
  Status status = Status::InfeasibleInstance;
  double optimal_cost = 0.0;
  std::vector<int> open_facilities;
  std::vector<double> assignment;  // m*n row-major
  long iterations = 0;
  struct TracePoint {
    long iteration;
    double lower_bound;
    double upper_bound;
  };
  std::vector<TracePoint> trace;
  double wall_time_seconds = 0.0;
};

// Optimality cut from a dual point: const = sum_i u_i and
// y_coeff_j = -sum_i v_ij - s_j w_j, accumulated from the same per-customer
// terms the disaggregated cuts use so the two forms sum identically.
Cut build_aggregate_optimality_cut(const DualSolution& dual, const Instance& inst);

// Feasibility cut from a dual ray: const + y_coeff'y <= 0 excludes every
// opening vector whose subproblem the ray proves infeasible.
Cut build_feasibility_cut(const DualSolution& ray, const Instance& inst);

// Classic single-cut loop: start from all facilities open, alternate
// subproblem and master, add one cut per iteration, stop at the gap.
SolveReport solve_classic(const Instance& inst, const SolveOptions& options = {});

namespace detail {
SolveReport run_benders(const Instance& inst, Algorithm algorithm, const SolveOptions& options);
}

}  // namespace cflp
