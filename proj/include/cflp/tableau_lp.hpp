#pragma once

#include "cflp/lp.hpp"

namespace cflp::lp {

// Independent reference solver: classic two-phase full-tableau simplex with
// Bland's rule throughout. Bounds are rewritten as explicit rows and free
// variables are split, so nothing here shares structure with the revised
// engine. Slow and simple; used to cross-check the engine and the
// enumeration oracle. Returns Optimal, Infeasible (no ray), or Unbounded.
LpSolution solve_lp_tableau(const LinearProgram& lp);

}  // namespace cflp::lp
