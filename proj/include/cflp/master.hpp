#pragma once

#include <optional>
#include <span>
#include <vector>

#include "cflp/instance.hpp"
#include "cflp/lp.hpp"

namespace cflp {

// One Benders cut, stored as its dual-derived affine part. Fixed costs live
// in the master objective, so an aggregate optimality cut reads
//   eta >= const_term + y_coeff'y,
// a disaggregated one bounds theta_i the same way, and a feasibility cut is
//   const_term + y_coeff'y <= 0.
struct Cut {
  enum class Kind { OptimalityAggregate, OptimalityDisaggregated, Feasibility };
  Kind kind = Kind::OptimalityAggregate;
  double const_term = 0.0;
  std::vector<double> y_coeff;      // length n
  std::optional<int> theta_index;   // customer index for disaggregated cuts
};

// const_term + y_coeff'y (compensated sum; cuts at bound-scale magnitudes
// must evaluate well below the 1e-9 satisfaction tolerance).
double cut_value_at(const Cut& cut, std::span<const double> y);
double cut_value_at(const Cut& cut, const std::vector<int>& y);

enum class MasterMode { Aggregate, Disaggregated };

// Relaxed master problem: min f'y + sum of epigraph variables subject to the
// cut pool, y binary, epigraphs floored at 0. Solved exactly by best-first
// branch-and-bound on the LP relaxation, branching on the most fractional
// y_j (ties to the lowest index). Node LPs warm-start from the parent basis
// and the root LP from the previous solve; the incumbent is seeded with the
// previous optimum and the all-ones/all-zeros points before the search.
class MasterProblem {
 public:
  MasterProblem(const Instance& inst, MasterMode mode);

  // Throws std::invalid_argument on a mode/dimension mismatch.
  void add_cut(const Cut& cut);

  struct Result {
    bool feasible = false;       // false: feasibility cuts exclude every y
    std::vector<int> y;
    double objective = 0.0;
  };
  Result solve();

  MasterMode mode() const { return mode_; }
  const std::vector<Cut>& cuts() const { return cuts_; }
  const std::vector<int>& incumbent_y() const { return incumbent_y_; }
  double lower_bound() const { return lower_bound_; }

 private:
  struct Node;
  double exact_binary_value(const std::vector<int>& y, bool& feasible) const;
  void apply_bounds(const std::vector<std::int8_t>& fix);

  const Instance& inst_;
  MasterMode mode_;
  int num_epigraph_;
  std::vector<Cut> cuts_;
  lp::Simplex solver_;
  lp::BasisState root_basis_;
  bool have_root_basis_ = false;
  std::vector<int> incumbent_y_;
  double lower_bound_ = 0.0;
};

}  // namespace cflp
