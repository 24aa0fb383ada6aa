#include "cflp/master.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "cflp/subproblem.hpp"
#include "cflp/util.hpp"

namespace cflp {

namespace {

constexpr double kIntTol = 1e-6;  // relaxation value counted as integral

// Bound-vs-incumbent pruning margin. Near-optimal masters carry many
// almost-tied openings; pruning them at machine precision makes the search
// expand every tie. The optimum reported can sit above the true one by at
// most this margin, well inside the 1e-6 gap and certification tolerances.
double prune_margin(double incumbent) {
  return 1e-9 + 1e-7 * std::abs(incumbent);
}

lp::LinearProgram build_master_lp(const Instance& inst, int num_epigraph) {
  lp::LinearProgram prog;
  for (int j = 0; j < inst.num_facilities; ++j)
    prog.add_variable(inst.fixed_cost[j], 0.0, 1.0);
  for (int e = 0; e < num_epigraph; ++e) prog.add_variable(1.0, 0.0, lp::kInf);
  return prog;
}

}  // namespace

double cut_value_at(const Cut& cut, std::span<const double> y) {
  KahanSum s;
  s.add(cut.const_term);
  for (std::size_t j = 0; j < cut.y_coeff.size(); ++j)
    if (y[j] != 0.0) s.add(cut.y_coeff[j] * y[j]);
  return s.value();
}

double cut_value_at(const Cut& cut, const std::vector<int>& y) {
  std::vector<double> yd(y.begin(), y.end());
  return cut_value_at(cut, yd);
}

MasterProblem::MasterProblem(const Instance& inst, MasterMode mode)
    : inst_(inst),
      mode_(mode),
      num_epigraph_(mode == MasterMode::Aggregate ? 1 : inst.num_customers),
      solver_(build_master_lp(inst, num_epigraph_)) {}

void MasterProblem::add_cut(const Cut& cut) {
  const int n = inst_.num_facilities;
  if (static_cast<int>(cut.y_coeff.size()) != n)
    throw std::invalid_argument("cut coefficient length does not match the instance");
  // An aggregate cut in a disaggregated master bounds the SUM of the
  // epigraph variables; the multi-cut drivers add one as a coupling row
  // whenever the per-customer shares cannot reproduce it exactly.
  bool sum_cut = false;
  int theta_var = -1;
  switch (cut.kind) {
    case Cut::Kind::OptimalityAggregate:
      if (mode_ == MasterMode::Aggregate) theta_var = n;
      else sum_cut = true;
      break;
    case Cut::Kind::OptimalityDisaggregated:
      if (mode_ != MasterMode::Disaggregated)
        throw std::invalid_argument("disaggregated cut added to an aggregate master");
      if (!cut.theta_index || *cut.theta_index < 0 || *cut.theta_index >= inst_.num_customers)
        throw std::invalid_argument("disaggregated cut without a valid customer index");
      theta_var = n + *cut.theta_index;
      break;
    case Cut::Kind::Feasibility:
      break;
  }

  std::vector<std::pair<int, double>> coeffs;
  if (theta_var >= 0 || sum_cut) {
    // theta - y_coeff'y >= const  (theta = the whole epigraph sum if sum_cut)
    if (sum_cut)
      for (int e = 0; e < num_epigraph_; ++e) coeffs.push_back({n + e, 1.0});
    else
      coeffs.push_back({theta_var, 1.0});
    for (int j = 0; j < n; ++j)
      if (cut.y_coeff[j] != 0.0) coeffs.push_back({j, -cut.y_coeff[j]});
    solver_.add_constraint(lp::Sense::GreaterEqual, cut.const_term, std::move(coeffs));
  } else {
    // y_coeff'y <= -const
    for (int j = 0; j < n; ++j)
      if (cut.y_coeff[j] != 0.0) coeffs.push_back({j, cut.y_coeff[j]});
    solver_.add_constraint(lp::Sense::LessEqual, -cut.const_term, std::move(coeffs));
  }
  cuts_.push_back(cut);
}

// Objective of a binary point evaluated directly against the cut pool;
// independent of LP round-off, so incumbents carry exact values.
double MasterProblem::exact_binary_value(const std::vector<int>& y, bool& feasible) const {
  const int n = inst_.num_facilities;
  feasible = true;
  std::vector<double> theta(num_epigraph_, 0.0);
  double sum_floor = 0.0;  // largest rhs among epigraph-sum coupling rows
  for (const Cut& cut : cuts_) {
    double val = cut_value_at(cut, y);
    if (cut.kind == Cut::Kind::Feasibility) {
      double scale = 1.0 + std::abs(cut.const_term);
      if (val > 1e-9 * scale) { feasible = false; return 0.0; }
    } else if (cut.kind == Cut::Kind::OptimalityAggregate &&
               mode_ == MasterMode::Disaggregated) {
      sum_floor = std::max(sum_floor, val);
    } else {
      int t = cut.kind == Cut::Kind::OptimalityAggregate ? 0 : *cut.theta_index;
      theta[t] = std::max(theta[t], val);
    }
  }
  KahanSum theta_total;
  for (double t : theta) theta_total.add(t);
  KahanSum obj;
  for (int j = 0; j < n; ++j)
    if (y[j]) obj.add(inst_.fixed_cost[j]);
  obj.add(std::max(theta_total.value(), sum_floor));
  return obj.value();
}

void MasterProblem::apply_bounds(const std::vector<std::int8_t>& fix) {
  for (int j = 0; j < inst_.num_facilities; ++j) {
    double lo = fix[j] == 1 ? 1.0 : 0.0;
    double hi = fix[j] == 0 ? 0.0 : 1.0;
    solver_.set_variable_bounds(j, lo, hi);
  }
}

struct MasterProblem::Node {
  std::vector<std::int8_t> fix;  // -1 free, 0 fixed closed, 1 fixed open
  lp::BasisState basis;
  double bound;
  long id;
};

MasterProblem::Result MasterProblem::solve() {
  const int n = inst_.num_facilities;

  Result best;
  double best_val = lp::kInf;
  auto offer_candidate = [&](const std::vector<int>& y) {
    bool ok = false;
    double val = exact_binary_value(y, ok);
    if (ok && val < best_val - 1e-12) {
      best_val = val;
      best.feasible = true;
      best.y = y;
      best.objective = val;
    }
  };
  if (static_cast<int>(incumbent_y_.size()) == n) offer_candidate(incumbent_y_);
  offer_candidate(std::vector<int>(n, 1));
  offer_candidate(std::vector<int>(n, 0));

  auto cmp = [](const Node& a, const Node& b) {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  };
  std::priority_queue<Node, std::vector<Node>, decltype(cmp)> open(cmp);
  long next_id = 0;
  open.push({std::vector<std::int8_t>(n, -1),
             have_root_basis_ ? root_basis_ : lp::BasisState{}, -lp::kInf, next_id++});

  bool root_node = true;
  long nodes = 0;
  while (!open.empty()) {
    Node node = std::move(const_cast<Node&>(open.top()));
    open.pop();
    if (++nodes > 2000000) throw NumericalError("master branch-and-bound node limit exceeded");
    if (node.bound >= best_val - prune_margin(best_val)) continue;

    apply_bounds(node.fix);
    lp::LpSolution rel =
        node.basis.empty() ? solver_.solve() : solver_.solve_from(node.basis);
    if (rel.status == lp::SolveStatus::Infeasible) { root_node = false; continue; }
    if (rel.status != lp::SolveStatus::Optimal)
      throw NumericalError("master relaxation could not be solved");
    if (root_node) {
      root_basis_ = solver_.basis();
      have_root_basis_ = true;
      root_node = false;
    }
    if (rel.objective >= best_val - prune_margin(best_val)) continue;

    // most fractional y, ties to the lowest index
    int branch = -1;
    double best_frac = kIntTol;
    for (int j = 0; j < n; ++j) {
      if (node.fix[j] != -1) continue;
      double frac = std::min(rel.x[j], 1.0 - rel.x[j]);
      if (frac > best_frac) { branch = j; best_frac = frac; }
    }
    if (branch == -1) {
      std::vector<int> y(n);
      for (int j = 0; j < n; ++j)
        y[j] = node.fix[j] != -1 ? node.fix[j] : (rel.x[j] > 0.5 ? 1 : 0);
      offer_candidate(y);
      continue;
    }

    lp::BasisState basis = solver_.basis();
    for (int val = 0; val <= 1; ++val) {
      Node child;
      child.fix = node.fix;
      child.fix[branch] = static_cast<std::int8_t>(val);
      child.basis = basis;
      child.bound = rel.objective;
      child.id = next_id++;
      open.push(std::move(child));
    }
  }

  // leave the solver in the unbranched state for the next add_cut/solve
  apply_bounds(std::vector<std::int8_t>(n, -1));

  if (best.feasible) {
    incumbent_y_ = best.y;
    lower_bound_ = best.objective;
  }
  return best;
}

}  // namespace cflp
