#include "cflp/subproblem.hpp"

#include <algorithm>
#include <cmath>

#include "cflp/lp.hpp"
#include "cflp/util.hpp"

namespace cflp {

double DualSolution::objective_at(const Instance& inst, std::span<const double> y) const {
  const int m = inst.num_customers;
  const int n = inst.num_facilities;
  KahanSum total;
  for (int i = 0; i < m; ++i) total.add(u[i]);
  for (int j = 0; j < n; ++j) {
    if (y[j] == 0.0) continue;
    KahanSum vj;
    for (int i = 0; i < m; ++i) vj.add(v[static_cast<std::size_t>(i) * n + j]);
    total.add(-y[j] * vj.value());
    total.add(-inst.capacity[j] * y[j] * w[j]);
  }
  return total.value();
}

SubproblemResult solve_transport(const Instance& inst, std::span<const double> levels,
                                 double demand_rhs) {
  const int m = inst.num_customers;
  const int n = inst.num_facilities;

  std::vector<int> active;
  for (int j = 0; j < n; ++j)
    if (levels[j] > 0.0) active.push_back(j);
  const int na = static_cast<int>(active.size());

  lp::LinearProgram prog;
  // variable (i, a) -> i * na + a
  for (int i = 0; i < m; ++i)
    for (int a = 0; a < na; ++a)
      prog.add_variable(inst.demand[i] * inst.cost(i, active[a]), 0.0, levels[active[a]]);
  for (int i = 0; i < m; ++i) {
    std::vector<std::pair<int, double>> coeffs;
    for (int a = 0; a < na; ++a) coeffs.push_back({i * na + a, 1.0});
    prog.add_constraint(lp::Sense::GreaterEqual, demand_rhs, std::move(coeffs));
  }
  for (int a = 0; a < na; ++a) {
    std::vector<std::pair<int, double>> coeffs;
    for (int i = 0; i < m; ++i) coeffs.push_back({i * na + a, inst.demand[i]});
    prog.add_constraint(lp::Sense::LessEqual, inst.capacity[active[a]] * levels[active[a]],
                        std::move(coeffs));
  }

  lp::LpSolution sol = lp::solve_lp(prog);
  if (sol.status == lp::SolveStatus::Infeasible) {
    // re-derive the certificate from a phase-1 solve: its duals combine all
    // shortfalls, which makes a far stronger feasibility cut
    lp::Simplex fresh(prog);
    lp::LpSolution redo = fresh.solve_primal();
    if (redo.status == lp::SolveStatus::Infeasible) sol = std::move(redo);
  }

  SubproblemResult out;
  out.dual.u.assign(m, 0.0);
  out.dual.v.assign(static_cast<std::size_t>(m) * n, 0.0);
  out.dual.w.assign(n, 0.0);

  // Facilities dropped from the solve still need dual values satisfying
  // u_i - v_ij - d_i w_j <= d_i c_ij (<= 0 for rays). Any nonnegative
  // completion is valid and leaves the objective at the generating levels
  // unchanged, so pick the one of least total cut weight: minimize
  // s_j w + sum_i max(0, base_ij - d_i w), convex piecewise-linear in w with
  // breakpoints where a term vanishes.
  auto complete_inactive = [&](std::vector<double>& v, std::vector<double>& w,
                               const std::vector<double>& u) {
    const bool ray = out.dual.kind == DualSolution::Kind::UnboundedRay;
    std::vector<double> base(m);
    std::vector<double> breakpoints;
    for (int j = 0; j < n; ++j) {
      if (levels[j] != 0.0) continue;
      breakpoints.assign(1, 0.0);
      for (int i = 0; i < m; ++i) {
        base[i] = ray ? u[i] : u[i] - inst.demand[i] * inst.cost(i, j);
        if (base[i] > 0.0) breakpoints.push_back(base[i] / inst.demand[i]);
      }
      double best_w = 0.0, best_g = lp::kInf;
      bool first = true;
      for (double cand : breakpoints) {
        double g = inst.capacity[j] * cand;
        for (int i = 0; i < m; ++i) g += std::max(0.0, base[i] - inst.demand[i] * cand);
        double tol = 1e-12 * (1.0 + std::abs(g));
        if (first || g < best_g - tol || (g <= best_g + tol && cand < best_w)) {
          best_g = g;
          best_w = cand;
          first = false;
        }
      }
      w[j] = best_w;
      for (int i = 0; i < m; ++i)
        v[static_cast<std::size_t>(i) * n + j] =
            std::max(0.0, base[i] - inst.demand[i] * best_w);
    }
  };

  if (sol.status == lp::SolveStatus::Optimal) {
    out.status = SubproblemResult::Status::Feasible;
    out.dual.kind = DualSolution::Kind::OptimalPoint;
    out.primal_x.assign(static_cast<std::size_t>(m) * n, 0.0);
    for (int i = 0; i < m; ++i)
      for (int a = 0; a < na; ++a)
        out.primal_x[static_cast<std::size_t>(i) * n + active[a]] = sol.x[i * na + a];
    out.transport_cost = sol.objective;
    for (int i = 0; i < m; ++i) out.dual.u[i] = std::max(0.0, sol.row_dual[i]);
    for (int a = 0; a < na; ++a)
      out.dual.w[active[a]] = std::max(0.0, -sol.row_dual[m + a]);
    for (int i = 0; i < m; ++i)
      for (int a = 0; a < na; ++a) {
        double rc = sol.reduced_cost[i * na + a];
        if (rc < 0.0) out.dual.v[static_cast<std::size_t>(i) * n + active[a]] = -rc;
      }

    // The demand dual is degenerate whenever a customer has slack at its
    // serving facility: any u_i up to the second-smallest effective price
    // p_j = d_i (c_ij + w_j) over open facilities is optimal once v takes up
    // the difference. The high-u vertex gives strictly stronger cuts, so
    // lift toward it per customer, keeping the objective contribution bit
    // for bit (skip when the prices tie or the check detects a change).
    bool binary_levels = demand_rhs == 1.0;
    for (int j = 0; j < n && binary_levels; ++j)
      binary_levels = levels[j] == 0.0 || levels[j] == 1.0;
    if (binary_levels && na >= 2) {
      std::vector<double> price(na);
      for (int i = 0; i < m; ++i) {
        double p1 = lp::kInf, p2 = lp::kInf;
        for (int a = 0; a < na; ++a) {
          price[a] = inst.demand[i] * (inst.cost(i, active[a]) + out.dual.w[active[a]]);
          if (price[a] < p1) { p2 = p1; p1 = price[a]; }
          else if (price[a] < p2) p2 = price[a];
        }
        double u_old = out.dual.u[i];
        if (!(p2 > u_old) || !std::isfinite(p2)) continue;
        double old_contrib = u_old;
        for (int a = 0; a < na; ++a)
          old_contrib -= out.dual.v[static_cast<std::size_t>(i) * n + active[a]];
        double new_contrib = p2;
        for (int a = 0; a < na; ++a) new_contrib -= std::max(0.0, p2 - price[a]);
        if (std::abs(new_contrib - old_contrib) > 1e-9 * (1.0 + std::abs(old_contrib)))
          continue;
        out.dual.u[i] = p2;
        for (int a = 0; a < na; ++a)
          out.dual.v[static_cast<std::size_t>(i) * n + active[a]] = std::max(0.0, p2 - price[a]);
      }
    }

    complete_inactive(out.dual.v, out.dual.w, out.dual.u);
    out.dual.objective = out.transport_cost;
    return out;
  }

  if (sol.status == lp::SolveStatus::Infeasible) {
    out.status = SubproblemResult::Status::Infeasible;
    out.dual.kind = DualSolution::Kind::UnboundedRay;
    for (int i = 0; i < m; ++i) out.dual.u[i] = std::max(0.0, sol.farkas_row[i]);
    for (int a = 0; a < na; ++a)
      out.dual.w[active[a]] = std::max(0.0, -sol.farkas_row[m + a]);
    // homogeneous dual feasibility: v_ij >= u_i - d_i w_j
    for (int i = 0; i < m; ++i)
      for (int a = 0; a < na; ++a) {
        int j = active[a];
        double need = out.dual.u[i] - inst.demand[i] * out.dual.w[j];
        if (need > 0.0) out.dual.v[static_cast<std::size_t>(i) * n + j] = need;
      }
    complete_inactive(out.dual.v, out.dual.w, out.dual.u);
    std::vector<double> lev(levels.begin(), levels.end());
    out.dual.objective = out.dual.objective_at(inst, lev);
    return out;
  }

  throw NumericalError("assignment subproblem: simplex could not certify a result");
}

SubproblemResult solve_subproblem(const Instance& inst, const std::vector<int>& y) {
  std::vector<double> levels(y.begin(), y.end());
  return solve_transport(inst, levels, 1.0);
}

}  // namespace cflp
