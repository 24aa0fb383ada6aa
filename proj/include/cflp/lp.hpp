#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <utility>
#include <vector>

namespace cflp::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense : std::uint8_t { LessEqual, GreaterEqual, Equal };

// min cost'x  s.t. rows, lower <= x <= upper. Row senses as given; every
// variable may carry finite or infinite bounds on either side.
struct LinearProgram {
  std::vector<double> cost;
  std::vector<double> lower;
  std::vector<double> upper;

  struct Row {
    Sense sense;
    double rhs;
    std::vector<std::pair<int, double>> coeffs;  // (variable, coefficient)
  };
  std::vector<Row> rows;

  int add_variable(double c, double lo, double hi) {
    cost.push_back(c);
    lower.push_back(lo);
    upper.push_back(hi);
    return static_cast<int>(cost.size()) - 1;
  }
  int add_constraint(Sense sense, double rhs, std::vector<std::pair<int, double>> coeffs) {
    rows.push_back({sense, rhs, std::move(coeffs)});
    return static_cast<int>(rows.size()) - 1;
  }
  int num_vars() const { return static_cast<int>(cost.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }
};

enum class SolveStatus : std::uint8_t {
  Optimal,
  Infeasible,   // farkas_row certifies
  Unbounded,
  PivotLimit,   // could not certify optimality or infeasibility
};

// Dual sign convention: row_dual[k] = y_k with reduced costs
// rc_j = cost_j - sum_k y_k a_kj. For a minimization, y_k >= 0 on >= rows,
// y_k <= 0 on <= rows, free on equalities. At an optimum,
//   objective = sum_k y_k rhs_k + sum_{j nonbasic} rc_j x_j.
// farkas_row (when Infeasible) holds multipliers with the same per-row sign
// pattern proving that no point within the variable bounds satisfies all rows.
struct LpSolution {
  SolveStatus status = SolveStatus::PivotLimit;
  double objective = 0.0;
  std::vector<double> x;
  std::vector<double> row_dual;
  std::vector<double> reduced_cost;
  std::vector<double> farkas_row;
  long pivots = 0;
};

// Variable status snapshot, one entry per structural variable followed by one
// per row logical. Used to warm-start related solves (branch-and-bound nodes,
// a master problem after new cuts). Missing trailing entries for rows added
// after the snapshot default to basic logicals.
using BasisState = std::vector<std::uint8_t>;

// Bounded-variable simplex over the equality form  Ax + s = b  with one
// logical s_k per row. The basis is kept as "unit-owned rows + structural
// block": rows whose basic variable is their own logical (or a phase-1
// artificial) need no factorization, and only the small square block W of
// basic structural columns on the remaining rows is inverted. W^-1 is
// maintained by rank-one updates during a solve and rebuilt from the basis
// on entry, periodically, and whenever a pivot looks numerically unsafe.
//
// Pricing is Dantzig; after 10*(rows+vars) pivots the engine switches to
// Bland's rule. A solve that starts from a dual-feasible basis (every LP in
// this project with nonnegative costs, cold or warm) runs the dual simplex;
// anything else runs the primal method with a phase-1 artificial objective.
class Simplex {
 public:
  explicit Simplex(LinearProgram lp);
  ~Simplex();
  Simplex(Simplex&&) noexcept;
  Simplex& operator=(Simplex&&) noexcept;

  void set_variable_bounds(int var, double lo, double hi);
  int add_constraint(Sense sense, double rhs, std::vector<std::pair<int, double>> coeffs);

  LpSolution solve();
  LpSolution solve_from(const BasisState& basis);
  // Two-phase primal from a cold start. Infeasibility certificates come from
  // the phase-1 duals, which combine every violated row; the dual-simplex
  // path instead certifies through a single row, which is a much weaker ray
  // for cut generation.
  LpSolution solve_primal();
  BasisState basis() const;  // valid after a solve

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// One-shot convenience wrapper.
LpSolution solve_lp(const LinearProgram& lp);

}  // namespace cflp::lp
