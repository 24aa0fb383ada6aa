#include "cflp/oracle.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "cflp/lp.hpp"
#include "cflp/subproblem.hpp"
#include "cflp/tableau_lp.hpp"
#include "cflp/util.hpp"

namespace cflp {

namespace {

// Assignment LP at a fixed opening set, built here on purpose rather than
// through the subproblem module so a bug there cannot confirm itself.
bool tableau_transport(const Instance& inst, const std::vector<int>& open_set, double& cost,
                       std::vector<double>& x_full) {
  const int m = inst.num_customers;
  const int n = inst.num_facilities;
  const int na = static_cast<int>(open_set.size());
  lp::LinearProgram prog;
  for (int i = 0; i < m; ++i)
    for (int a = 0; a < na; ++a)
      prog.add_variable(inst.demand[i] * inst.cost(i, open_set[a]), 0.0, 1.0);
  for (int i = 0; i < m; ++i) {
    std::vector<std::pair<int, double>> coeffs;
    for (int a = 0; a < na; ++a) coeffs.push_back({i * na + a, 1.0});
    prog.add_constraint(lp::Sense::Equal, 1.0, std::move(coeffs));
  }
  for (int a = 0; a < na; ++a) {
    std::vector<std::pair<int, double>> coeffs;
    for (int i = 0; i < m; ++i) coeffs.push_back({i * na + a, inst.demand[i]});
    prog.add_constraint(lp::Sense::LessEqual, inst.capacity[open_set[a]], std::move(coeffs));
  }
  lp::LpSolution sol = lp::solve_lp_tableau(prog);
  if (sol.status != lp::SolveStatus::Optimal) return false;
  cost = sol.objective;
  x_full.assign(static_cast<std::size_t>(m) * n, 0.0);
  for (int i = 0; i < m; ++i)
    for (int a = 0; a < na; ++a)
      x_full[static_cast<std::size_t>(i) * n + open_set[a]] = sol.x[i * na + a];
  return true;
}

bool lex_less(const std::vector<int>& a, const std::vector<int>& b) {
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j] != b[j]) return a[j] < b[j];
  }
  return false;
}

}  // namespace

Solution solve_exhaustive(const Instance& inst, const OracleOptions& options) {
  const int n = inst.num_facilities;
  if (n > options.max_facilities)
    throw OracleError(OracleError::Kind::TooManyFacilities,
                      "enumeration over " + std::to_string(n) + " facilities exceeds the cap of " +
                          std::to_string(options.max_facilities));
  ValidationResult valid = validate_instance(inst);
  if (!valid.ok())
    throw OracleError(OracleError::Kind::InfeasibleInstance,
                      "instance is invalid or unsolvable: " + valid.violations[0].message);

  const double total_demand = inst.total_demand();
  Solution best;
  best.total_cost = lp::kInf;
  bool found = false;

  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> y(n, 0);
    std::vector<int> open_set;
    double cap = 0.0;
    KahanSum fixed;
    for (int j = 0; j < n; ++j)
      if (mask & (1u << j)) {
        y[j] = 1;
        open_set.push_back(j);
        cap += inst.capacity[j];
        fixed.add(inst.fixed_cost[j]);
      }
    if (cap < total_demand) continue;

    double transport = 0.0;
    std::vector<double> x;
    if (options.cross_validate) {
      if (!tableau_transport(inst, open_set, transport, x)) continue;
    } else {
      std::vector<double> levels(y.begin(), y.end());
      SubproblemResult sub = solve_transport(inst, levels, 1.0);
      if (sub.status != SubproblemResult::Status::Feasible) continue;
      transport = sub.transport_cost;
      x = std::move(sub.primal_x);
    }
    double total = fixed.value() + transport;
    bool better = total < best.total_cost;
    bool tie = total == best.total_cost && found && lex_less(y, best.open);
    if (better || tie) {
      best.open = y;
      best.assignment = std::move(x);
      best.total_cost = total;
      found = true;
    }
  }

  if (!found)
    throw OracleError(OracleError::Kind::InfeasibleInstance,
                      "no opening subset can cover total demand");
  return best;
}

}  // namespace cflp
