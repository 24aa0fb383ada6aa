#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "cflp/instance.hpp"

namespace cflp {

// The simplex engine could not certify an optimum or an infeasibility proof.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dual information for the fixed-opening assignment subproblem:
//   u_i  per-customer demand dual       (>= 0)
//   v_ij per-pair assignment-bound dual (>= 0)
//   w_j  per-facility capacity dual     (>= 0)
// An optimal point satisfies u_i - v_ij - d_i w_j <= d_i c_ij; an unbounded
// ray satisfies the homogeneous version and has positive value at the
// opening vector that produced it.
struct DualSolution {
  enum class Kind { OptimalPoint, UnboundedRay };
  Kind kind = Kind::OptimalPoint;
  std::vector<double> u;  // size m
  std::vector<double> v;  // size m*n, row-major
  std::vector<double> w;  // size n
  double objective = 0.0;  // value at the generating opening vector

  // sum_i u_i - sum_j y_j (sum_i v_ij) - sum_j s_j y_j w_j for any y,
  // fractional or binary.
  double objective_at(const Instance& inst, std::span<const double> y) const;
};

struct SubproblemResult {
  enum class Status { Feasible, Infeasible };
  Status status = Status::Infeasible;
  std::vector<double> primal_x;  // m*n, empty when infeasible
  DualSolution dual;             // optimal point or certifying ray
  double transport_cost = 0.0;   // when feasible
};

// Assignment subproblem with facility j available at fractional level
// levels[j] >= 0 and every demand row scaled to demand_rhs:
//   min sum d_i c_ij x_ij
//   s.t. sum_j x_ij >= demand_rhs, x_ij <= levels[j],
//        sum_i d_i x_ij <= s_j levels[j], x >= 0.
// Facilities at level 0 are dropped from the solve; their duals are
// completed afterwards with w_j = 0 and v_ij just large enough for dual
// feasibility. Throws NumericalError if the engine cannot certify a result.
SubproblemResult solve_transport(const Instance& inst, std::span<const double> levels,
                                 double demand_rhs);

// The subproblem at a binary opening vector (demand rhs 1).
SubproblemResult solve_subproblem(const Instance& inst, const std::vector<int>& y);

}  // namespace cflp
