#include "cflp/tableau_lp.hpp"

#include <cmath>
#include <vector>

namespace cflp::lp {

namespace {

constexpr double kEps = 1e-9;

struct Tableau {
  int rows = 0, cols = 0;  // cols excludes the rhs column
  std::vector<double> a;   // (rows+1) x (cols+1), last row = objective
  std::vector<int> basis;  // basic column per row
  std::vector<char> banned;  // columns barred from entering

  double& at(int r, int c) { return a[static_cast<std::size_t>(r) * (cols + 1) + c]; }

  // Bland: entering = lowest-index column with negative objective coefficient.
  // Returns 0 optimal, 1 unbounded.
  int iterate() {
    for (;;) {
      int e = -1;
      for (int c = 0; c < cols; ++c)
        if (!banned[c] && at(rows, c) < -kEps) { e = c; break; }
      if (e == -1) return 0;
      int l = -1;
      double best = 0.0;
      for (int r = 0; r < rows; ++r) {
        if (at(r, e) <= kEps) continue;
        double ratio = at(r, cols) / at(r, e);
        if (l == -1 || ratio < best - kEps ||
            (ratio < best + kEps && basis[r] < basis[l]))
          { l = r; best = ratio; }
      }
      if (l == -1) return 1;
      pivot(l, e);
    }
  }

  void pivot(int l, int e) {
    double p = at(l, e);
    for (int c = 0; c <= cols; ++c) at(l, c) /= p;
    for (int r = 0; r <= rows; ++r) {
      if (r == l) continue;
      double f = at(r, e);
      if (f == 0.0) continue;
      for (int c = 0; c <= cols; ++c) at(r, c) -= f * at(l, c);
    }
    basis[l] = e;
  }
};

}  // namespace

LpSolution solve_lp_tableau(const LinearProgram& lp) {
  // Rewrite into: min c'z, Gz >= / <= / == h, z >= 0, where each original
  // variable becomes z (shifted by a finite lower bound) or z+ - z- (free),
  // and finite bounds become extra rows.
  int n = lp.num_vars();
  struct VarMap {
    int zplus, zminus;  // zminus = -1 unless the variable is free both sides
    double shift;       // x = shift + z
  };
  std::vector<VarMap> vmap(n);
  int nz = 0;
  std::vector<LinearProgram::Row> rows = lp.rows;
  for (int j = 0; j < n; ++j) {
    double lo = lp.lower[j], up = lp.upper[j];
    if (std::isfinite(lo)) {
      vmap[j] = {nz++, -1, lo};
      if (std::isfinite(up)) rows.push_back({Sense::LessEqual, up, {{j, 1.0}}});
    } else if (std::isfinite(up)) {
      // x = up - z, z >= 0: substitute with negated coefficient
      vmap[j] = {nz++, -2, up};
    } else {
      vmap[j] = {nz, nz + 1, 0.0};
      nz += 2;
    }
  }

  auto expand = [&](int j, double coef, std::vector<double>& dense, double& rhs_shift) {
    const VarMap& m = vmap[j];
    if (m.zminus == -1) {
      dense[m.zplus] += coef;
      rhs_shift += coef * m.shift;
    } else if (m.zminus == -2) {
      dense[m.zplus] -= coef;
      rhs_shift += coef * m.shift;
    } else {
      dense[m.zplus] += coef;
      dense[m.zminus] -= coef;
    }
  };

  int mrows = static_cast<int>(rows.size());
  std::vector<std::vector<double>> G(mrows, std::vector<double>(nz, 0.0));
  std::vector<double> h(mrows, 0.0);
  std::vector<Sense> sense(mrows);
  for (int r = 0; r < mrows; ++r) {
    double shift = 0.0;
    for (auto& [j, coef] : rows[r].coeffs) expand(j, coef, G[r], shift);
    h[r] = rows[r].rhs - shift;
    sense[r] = rows[r].sense;
  }
  std::vector<double> c(nz, 0.0);
  double obj_shift = 0.0;  // objective reported from original costs, shift unused
  {
    std::vector<double> dense(nz, 0.0);
    for (int j = 0; j < n; ++j)
      if (lp.cost[j] != 0.0) expand(j, lp.cost[j], dense, obj_shift);
    c = dense;
  }
  (void)obj_shift;

  // Slack/surplus columns, then artificials; rhs made nonnegative first.
  int total_cols = nz;
  std::vector<int> slack_col(mrows, -1);
  for (int r = 0; r < mrows; ++r) {
    if (h[r] < 0.0) {
      for (double& g : G[r]) g = -g;
      h[r] = -h[r];
      sense[r] = sense[r] == Sense::LessEqual ? Sense::GreaterEqual
                 : sense[r] == Sense::GreaterEqual ? Sense::LessEqual
                                                   : Sense::Equal;
    }
    if (sense[r] != Sense::Equal) slack_col[r] = total_cols++;
  }
  std::vector<int> art_col(mrows, -1);
  for (int r = 0; r < mrows; ++r) {
    bool needs_art = sense[r] == Sense::Equal || sense[r] == Sense::GreaterEqual;
    if (needs_art) art_col[r] = total_cols++;
  }

  Tableau t;
  t.rows = mrows;
  t.cols = total_cols;
  t.a.assign(static_cast<std::size_t>(mrows + 1) * (total_cols + 1), 0.0);
  t.basis.assign(mrows, -1);
  t.banned.assign(total_cols, 0);
  for (int r = 0; r < mrows; ++r) {
    for (int j = 0; j < nz; ++j) t.at(r, j) = G[r][j];
    if (slack_col[r] >= 0) t.at(r, slack_col[r]) = sense[r] == Sense::LessEqual ? 1.0 : -1.0;
    if (art_col[r] >= 0) t.at(r, art_col[r]) = 1.0;
    t.at(r, t.cols) = h[r];
    t.basis[r] = art_col[r] >= 0 ? art_col[r] : slack_col[r];
  }

  LpSolution sol;

  // phase 1
  bool any_art = false;
  for (int r = 0; r < mrows; ++r) any_art |= art_col[r] >= 0;
  if (any_art) {
    for (int r = 0; r < mrows; ++r)
      if (art_col[r] >= 0) t.at(mrows, art_col[r]) = 1.0;
    for (int r = 0; r < mrows; ++r)
      if (art_col[r] >= 0)
        for (int cidx = 0; cidx <= t.cols; ++cidx) t.at(mrows, cidx) -= t.at(r, cidx);
    if (t.iterate() != 0) { sol.status = SolveStatus::PivotLimit; return sol; }
    double scale = 1.0;
    for (int r = 0; r < mrows; ++r) scale = std::max(scale, std::abs(h[r]));
    if (-t.at(mrows, t.cols) > 1e-7 * scale) {
      sol.status = SolveStatus::Infeasible;
      return sol;
    }
    // pivot lingering artificials out where possible, then freeze them all
    for (int r = 0; r < mrows; ++r) {
      if (art_col[r] < 0 || t.basis[r] != art_col[r]) continue;
      for (int cjs = 0; cjs < t.cols; ++cjs) {
        bool is_art = false;
        for (int r2 = 0; r2 < mrows; ++r2) is_art |= art_col[r2] == cjs;
        if (!is_art && std::abs(t.at(r, cjs)) > kEps) { t.pivot(r, cjs); break; }
      }
    }
    for (int r = 0; r < mrows; ++r)
      if (art_col[r] >= 0) t.banned[art_col[r]] = 1;
  }

  // phase 2: rebuild objective row for the real costs
  for (int cidx = 0; cidx <= t.cols; ++cidx) t.at(mrows, cidx) = 0.0;
  for (int j = 0; j < nz; ++j) t.at(mrows, j) = c[j];
  for (int r = 0; r < mrows; ++r) {
    int b = t.basis[r];
    double f = t.at(mrows, b);
    if (f == 0.0) continue;
    for (int cidx = 0; cidx <= t.cols; ++cidx) t.at(mrows, cidx) -= f * t.at(r, cidx);
  }
  if (t.iterate() != 0) { sol.status = SolveStatus::Unbounded; return sol; }

  std::vector<double> z(total_cols, 0.0);
  for (int r = 0; r < mrows; ++r) z[t.basis[r]] = t.at(r, t.cols);
  sol.x.assign(n, 0.0);
  for (int j = 0; j < n; ++j) {
    const VarMap& m = vmap[j];
    if (m.zminus == -1) sol.x[j] = m.shift + z[m.zplus];
    else if (m.zminus == -2) sol.x[j] = m.shift - z[m.zplus];
    else sol.x[j] = z[m.zplus] - z[m.zminus];
  }
  double obj = 0.0;
  for (int j = 0; j < n; ++j) obj += lp.cost[j] * sol.x[j];
  sol.objective = obj;
  sol.status = SolveStatus::Optimal;
  return sol;
}

}  // namespace cflp::lp
