#include "cflp/lp.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <vector>

#include "cflp/util.hpp"

namespace cflp::lp {

namespace {

enum class VStat : std::uint8_t { Basic, AtLower, AtUpper, FreeNB };

constexpr double kFeasTol = 1e-9;    // bound violation considered zero
constexpr double kDualTol = 1e-9;    // reduced-cost sign slack
constexpr double kPivotTol = 1e-9;   // smallest usable pivot magnitude
constexpr double kZero = 1e-12;

bool finite(double x) { return std::isfinite(x); }

}  // namespace

struct Simplex::Impl {
  // Variables are numbered: structurals [0, ns), then per row (in creation
  // order) one logical and one phase-1 artificial. Unit columns never enter
  // the factorized block; only basic structural columns do.
  int ns = 0;
  int num_rows = 0;

  std::vector<double> lo, up, cost;     // per internal variable
  std::vector<int> unit_row;            // row of a unit column, -1 for structural
  std::vector<double> unit_coef;        // +-1 for unit columns, 0 otherwise

  std::vector<double> rhs;              // per row
  std::vector<int> logical_of, artificial_of;  // per row -> internal var

  // structural columns (CSC) and rows (CSR), structural entries only
  std::vector<int> cptr, cidx;
  std::vector<double> cval;
  std::vector<int> rptr, ridx;
  std::vector<double> rval;
  bool columns_dirty = true;

  // basis
  std::vector<VStat> stat;              // per internal variable
  std::vector<double> xval;             // per internal variable
  std::vector<int> owner;               // per row: basic unit var or -1
  std::vector<int> S;                   // basic structural variables
  std::vector<int> P;                   // rows not owned by a unit column
  std::vector<int> pos_in_S;            // per variable, -1 if absent
  std::vector<int> pos_in_P;            // per row, -1 if absent
  std::vector<double> winv;             // t*t, winv[q*t+p] = (W^-1)[q][p]

  long pivots_total = 0;
  long pivots_this_solve = 0;
  long bland_threshold = 0;
  long hard_limit = 0;
  int refactor_countdown = 0;

  // ---- construction ------------------------------------------------------

  explicit Impl(LinearProgram lp) {
    ns = lp.num_vars();
    cost = lp.cost;
    lo = lp.lower;
    up = lp.upper;
    unit_row.assign(ns, -1);
    unit_coef.assign(ns, 0.0);
    rptr.push_back(0);
    for (auto& row : lp.rows) append_row(row.sense, row.rhs, row.coeffs);
  }

  void append_row(Sense sense, double b, const std::vector<std::pair<int, double>>& coeffs) {
    int k = num_rows++;
    rhs.push_back(b);
    for (auto& [j, a] : coeffs) {
      assert(j >= 0 && j < ns);
      if (a != 0.0) {
        ridx.push_back(j);
        rval.push_back(a);
      }
    }
    rptr.push_back(static_cast<int>(ridx.size()));

    auto add_unit = [&](double l, double u, double coef) {
      int v = static_cast<int>(cost.size());
      cost.push_back(0.0);
      lo.push_back(l);
      up.push_back(u);
      unit_row.push_back(k);
      unit_coef.push_back(coef);
      return v;
    };
    double llo = 0.0, lup = 0.0;
    switch (sense) {
      case Sense::LessEqual: llo = 0.0; lup = kInf; break;
      case Sense::GreaterEqual: llo = -kInf; lup = 0.0; break;
      case Sense::Equal: llo = 0.0; lup = 0.0; break;
    }
    bool stat_live = !stat.empty();
    logical_of.push_back(add_unit(llo, lup, 1.0));
    if (stat_live) stat.push_back(VStat::Basic);  // keeps an existing basis valid
    artificial_of.push_back(add_unit(0.0, 0.0, 1.0));  // dormant until phase 1
    if (stat_live) stat.push_back(VStat::AtLower);
    columns_dirty = true;
  }

  int num_vars_internal() const { return static_cast<int>(cost.size()); }

  void rebuild_columns() {
    cptr.assign(ns + 1, 0);
    for (std::size_t e = 0; e < ridx.size(); ++e) cptr[ridx[e] + 1]++;
    for (int j = 0; j < ns; ++j) cptr[j + 1] += cptr[j];
    cidx.assign(ridx.size(), 0);
    cval.assign(ridx.size(), 0.0);
    std::vector<int> fill(cptr.begin(), cptr.end() - 1);
    for (int k = 0; k < num_rows; ++k)
      for (int e = rptr[k]; e < rptr[k + 1]; ++e) {
        int j = ridx[e];
        cidx[fill[j]] = k;
        cval[fill[j]] = rval[e];
        ++fill[j];
      }
    columns_dirty = false;
  }

  // ---- basis bookkeeping ---------------------------------------------------

  double bound_value(int v) const {
    switch (stat[v]) {
      case VStat::AtLower: return lo[v];
      case VStat::AtUpper: return up[v];
      default: return 0.0;
    }
  }

  void set_nonbasic_at_preferred(int v) {
    if (lo[v] == up[v]) { stat[v] = VStat::AtLower; return; }
    if (finite(lo[v])) stat[v] = VStat::AtLower;
    else if (finite(up[v])) stat[v] = VStat::AtUpper;
    else stat[v] = VStat::FreeNB;
  }

  void reset_to_logical_basis() {
    int nv = num_vars_internal();
    stat.assign(nv, VStat::AtLower);
    for (int j = 0; j < ns; ++j) set_nonbasic_at_preferred(j);
    for (int k = 0; k < num_rows; ++k) {
      stat[logical_of[k]] = VStat::Basic;
      stat[artificial_of[k]] = VStat::AtLower;  // dormant, bounds [0,0]
    }
    bool ok = refactorize();
    assert(ok);
    (void)ok;
  }

  // Rebuilds owner/S/P/W^-1 from statuses. Returns false if the recorded
  // basis is structurally or numerically unusable.
  bool refactorize() {
    if (columns_dirty) rebuild_columns();
    int nv = num_vars_internal();
    owner.assign(num_rows, -1);
    S.clear();
    pos_in_S.assign(nv, -1);
    pos_in_P.assign(num_rows, -1);
    int basic_count = 0;
    for (int v = 0; v < nv; ++v) {
      if (stat[v] != VStat::Basic) continue;
      ++basic_count;
      if (unit_row[v] >= 0) {
        if (owner[unit_row[v]] != -1) return false;  // parallel unit columns
        owner[unit_row[v]] = v;
      } else {
        pos_in_S[v] = static_cast<int>(S.size());
        S.push_back(v);
      }
    }
    if (basic_count != num_rows) return false;
    P.clear();
    for (int k = 0; k < num_rows; ++k)
      if (owner[k] == -1) {
        pos_in_P[k] = static_cast<int>(P.size());
        P.push_back(k);
      }
    if (P.size() != S.size()) return false;

    int t = static_cast<int>(S.size());
    // Gather W, W[p][q] = a(P[p], S[q]), and invert by Gauss-Jordan with
    // partial pivoting; winv[q*t+p] = (W^-1)[q][p].
    std::vector<double> M(static_cast<std::size_t>(t) * t, 0.0);
    for (int q = 0; q < t; ++q) {
      int j = S[q];
      for (int e = cptr[j]; e < cptr[j + 1]; ++e) {
        int p = pos_in_P[cidx[e]];
        if (p >= 0) M[static_cast<std::size_t>(p) * t + q] = cval[e];
      }
    }
    std::vector<double> inv(static_cast<std::size_t>(t) * t, 0.0);
    for (int d = 0; d < t; ++d) inv[static_cast<std::size_t>(d) * t + d] = 1.0;
    for (int col = 0; col < t; ++col) {
      int piv = col;
      double best = std::abs(M[static_cast<std::size_t>(col) * t + col]);
      for (int r = col + 1; r < t; ++r) {
        double a = std::abs(M[static_cast<std::size_t>(r) * t + col]);
        if (a > best) { best = a; piv = r; }
      }
      if (best < 1e-11) return false;
      if (piv != col)
        for (int c2 = 0; c2 < t; ++c2) {
          std::swap(M[static_cast<std::size_t>(piv) * t + c2], M[static_cast<std::size_t>(col) * t + c2]);
          std::swap(inv[static_cast<std::size_t>(piv) * t + c2], inv[static_cast<std::size_t>(col) * t + c2]);
        }
      double d0 = M[static_cast<std::size_t>(col) * t + col];
      for (int c2 = 0; c2 < t; ++c2) {
        M[static_cast<std::size_t>(col) * t + c2] /= d0;
        inv[static_cast<std::size_t>(col) * t + c2] /= d0;
      }
      for (int r = 0; r < t; ++r) {
        if (r == col) continue;
        double f = M[static_cast<std::size_t>(r) * t + col];
        if (f == 0.0) continue;
        for (int c2 = 0; c2 < t; ++c2) {
          M[static_cast<std::size_t>(r) * t + c2] -= f * M[static_cast<std::size_t>(col) * t + c2];
          inv[static_cast<std::size_t>(r) * t + c2] -= f * inv[static_cast<std::size_t>(col) * t + c2];
        }
      }
    }
    // inv now holds W^-1 in [row][col] layout; transpose into winv[q][p].
    winv.assign(static_cast<std::size_t>(t) * t, 0.0);
    for (int q = 0; q < t; ++q)
      for (int p = 0; p < t; ++p)
        winv[static_cast<std::size_t>(q) * t + p] = inv[static_cast<std::size_t>(q) * t + p];
    refactor_countdown = 150;
    return true;
  }

  // ---- linear algebra over the partitioned basis --------------------------

  // Solves B z = r. On return z_S[q] pairs with S[q] and z_owned[k] with
  // owner[k] (only owned rows are meaningful).
  void ftran(const std::vector<double>& r, std::vector<double>& z_S,
             std::vector<double>& z_owned) const {
    int t = static_cast<int>(S.size());
    z_S.assign(t, 0.0);
    for (int q = 0; q < t; ++q) {
      double acc = 0.0;
      const double* wr = &winv[static_cast<std::size_t>(q) * t];
      for (int p = 0; p < t; ++p) acc += wr[p] * r[P[p]];
      z_S[q] = acc;
    }
    z_owned.assign(num_rows, 0.0);
    for (int k = 0; k < num_rows; ++k) {
      int o = owner[k];
      if (o < 0) continue;
      double acc = r[k];
      for (int e = rptr[k]; e < rptr[k + 1]; ++e) {
        int q = pos_in_S[ridx[e]];
        if (q >= 0) acc -= rval[e] * z_S[q];
      }
      z_owned[k] = acc / unit_coef[o];
    }
  }

  // Solves y'B = c_B' for the given per-variable cost function.
  template <typename CostFn>
  void btran(CostFn cb, std::vector<double>& y) const {
    int t = static_cast<int>(S.size());
    y.assign(num_rows, 0.0);
    for (int k = 0; k < num_rows; ++k)
      if (owner[k] >= 0) y[k] = cb(owner[k]) / unit_coef[owner[k]];
    std::vector<double> g(t, 0.0);
    for (int q = 0; q < t; ++q) {
      int j = S[q];
      double acc = cb(j);
      for (int e = cptr[j]; e < cptr[j + 1]; ++e) {
        int k = cidx[e];
        if (owner[k] >= 0) acc -= cval[e] * y[k];
      }
      g[q] = acc;
    }
    for (int p = 0; p < t; ++p) {
      double acc = 0.0;
      for (int q = 0; q < t; ++q) acc += winv[static_cast<std::size_t>(q) * t + p] * g[q];
      y[P[p]] = acc;
    }
  }

  // Row multipliers rho with rho'B = e_(slot of basic variable l).
  void btran_unit(int l, std::vector<double>& y) const {
    int t = static_cast<int>(S.size());
    y.assign(num_rows, 0.0);
    std::vector<double> g(t, 0.0);
    if (unit_row[l] >= 0) {
      int r = unit_row[l];
      y[r] = 1.0 / unit_coef[l];
      for (int e = rptr[r]; e < rptr[r + 1]; ++e) {
        int q = pos_in_S[ridx[e]];
        if (q >= 0) g[q] -= rval[e] * y[r];
      }
    } else {
      g[pos_in_S[l]] = 1.0;
    }
    for (int p = 0; p < t; ++p) {
      double acc = 0.0;
      for (int q = 0; q < t; ++q) acc += winv[static_cast<std::size_t>(q) * t + p] * g[q];
      y[P[p]] = acc;
    }
  }

  double dot_column(const std::vector<double>& y, int v) const {
    if (unit_row[v] >= 0) return y[unit_row[v]] * unit_coef[v];
    double acc = 0.0;
    for (int e = cptr[v]; e < cptr[v + 1]; ++e) acc += cval[e] * y[cidx[e]];
    return acc;
  }

  // Computes values of all basic variables from the nonbasic bounds.
  void compute_basic_values() {
    std::vector<double> r = rhs;
    for (int j = 0; j < ns; ++j) {
      if (stat[j] == VStat::Basic) continue;
      double x = bound_value(j);
      if (x == 0.0) continue;
      for (int e = cptr[j]; e < cptr[j + 1]; ++e) r[cidx[e]] -= cval[e] * x;
    }
    // nonbasic unit columns sit at 0 except dormant artificials (also 0)
    std::vector<double> z_S, z_owned;
    ftran(r, z_S, z_owned);
    int nv = num_vars_internal();
    for (int v = 0; v < nv; ++v)
      if (stat[v] != VStat::Basic) xval[v] = bound_value(v);
    for (std::size_t q = 0; q < S.size(); ++q) xval[S[q]] = z_S[q];
    for (int k = 0; k < num_rows; ++k)
      if (owner[k] >= 0) xval[owner[k]] = z_owned[k];
  }

  // ---- pivoting ------------------------------------------------------------

  // Applies the basis change: entering variable e replaces leaving l, which
  // exits with status leave_stat. alpha_S/alpha_owned is ftran(A_e).
  // Returns false when the implied update is numerically unsafe.
  bool pivot(int e, int l, VStat leave_stat, const std::vector<double>& alpha_S,
             const std::vector<double>& alpha_owned) {
    int t = static_cast<int>(S.size());
    bool e_unit = unit_row[e] >= 0;
    bool l_unit = unit_row[l] >= 0;

    if (!e_unit && !l_unit) {
      int q = pos_in_S[l];
      double piv = alpha_S[q];
      if (std::abs(piv) < kPivotTol) return false;
      // column q of W becomes A_e; Gauss-Jordan update of the inverse
      std::vector<double> saved(&winv[static_cast<std::size_t>(q) * t],
                                &winv[static_cast<std::size_t>(q) * t] + t);
      for (int p = 0; p < t; ++p) winv[static_cast<std::size_t>(q) * t + p] = saved[p] / piv;
      for (int a = 0; a < t; ++a) {
        if (a == q) continue;
        double f = alpha_S[a];
        if (f == 0.0) continue;
        double* ra = &winv[static_cast<std::size_t>(a) * t];
        const double* rq = &winv[static_cast<std::size_t>(q) * t];
        for (int p = 0; p < t; ++p) ra[p] -= f * rq[p];
      }
      pos_in_S[l] = -1;
      S[q] = e;
      pos_in_S[e] = q;
    } else if (!e_unit && l_unit) {
      // row r joins P, e joins S; bordered inverse update
      int r = unit_row[l];
      double s = alpha_owned[r] * unit_coef[l];
      if (std::abs(s) < kPivotTol) return false;
      std::vector<double> gz(t, 0.0);  // g' = A_(r,S)' W^-1
      for (int e2 = rptr[r]; e2 < rptr[r + 1]; ++e2) {
        int q = pos_in_S[ridx[e2]];
        if (q < 0) continue;
        double a = rval[e2];
        const double* wq = &winv[static_cast<std::size_t>(q) * t];
        for (int p = 0; p < t; ++p) gz[p] += a * wq[p];
      }
      int t2 = t + 1;
      std::vector<double> nw(static_cast<std::size_t>(t2) * t2, 0.0);
      for (int a = 0; a < t; ++a) {
        const double* wa = &winv[static_cast<std::size_t>(a) * t];
        double za = alpha_S[a];
        double* na = &nw[static_cast<std::size_t>(a) * t2];
        for (int p = 0; p < t; ++p) na[p] = wa[p] + za * gz[p] / s;
        na[t] = -za / s;
      }
      double* nt = &nw[static_cast<std::size_t>(t) * t2];
      for (int p = 0; p < t; ++p) nt[p] = -gz[p] / s;
      nt[t] = 1.0 / s;
      winv.swap(nw);
      owner[r] = -1;
      pos_in_P[r] = t;
      P.push_back(r);
      pos_in_S[e] = t;
      S.push_back(e);
    } else if (e_unit && !l_unit) {
      // row r leaves P (owned by e), structural l leaves S; deflate inverse
      int r = unit_row[e];
      int p_r = pos_in_P[r];
      int q_l = pos_in_S[l];
      if (p_r < 0 || q_l < 0) return false;
      double s = winv[static_cast<std::size_t>(q_l) * t + p_r];
      if (std::abs(s) < kPivotTol) return false;
      std::vector<double> ucol(t), vrow(t);
      for (int a = 0; a < t; ++a) ucol[a] = winv[static_cast<std::size_t>(a) * t + p_r];
      for (int p = 0; p < t; ++p) vrow[p] = winv[static_cast<std::size_t>(q_l) * t + p];
      int t2 = t - 1;
      std::vector<double> nw(static_cast<std::size_t>(t2) * t2, 0.0);
      // order preserved by dropping slot q_l from S and p_r from P with a
      // swap-to-last compaction on both sides
      std::vector<int> mapS(t), mapP(t);
      for (int a = 0; a < t; ++a) mapS[a] = a;
      for (int p = 0; p < t; ++p) mapP[p] = p;
      mapS[q_l] = t - 1; mapS[t - 1] = q_l;
      mapP[p_r] = t - 1; mapP[t - 1] = p_r;
      for (int a = 0; a < t2; ++a) {
        int qa = mapS[a];
        double* na = &nw[static_cast<std::size_t>(a) * t2];
        const double* wa = &winv[static_cast<std::size_t>(qa) * t];
        for (int p = 0; p < t2; ++p) {
          int pp = mapP[p];
          na[p] = wa[pp] - ucol[qa] * vrow[pp] / s;
        }
      }
      // compact S and P with the same swaps
      auto drop = [](std::vector<int>& vec, std::vector<int>& pos, int at) {
        int last = static_cast<int>(vec.size()) - 1;
        pos[vec[at]] = -1;
        if (at != last) {
          vec[at] = vec[last];
          pos[vec[at]] = at;
        }
        vec.pop_back();
      };
      drop(S, pos_in_S, q_l);
      drop(P, pos_in_P, p_r);
      winv.swap(nw);
      owner[r] = e;
    } else {
      // unit-for-unit: row r_in becomes owned, row r_out joins P in its place
      int r_in = unit_row[e];
      int r_out = unit_row[l];
      int p_in = pos_in_P[r_in];
      if (p_in < 0) return false;
      std::vector<double> h(t, 0.0);  // (A_(r_out,S) - A_(r_in,S))' W^-1
      auto accum_row = [&](int row, double sign) {
        for (int e2 = rptr[row]; e2 < rptr[row + 1]; ++e2) {
          int q = pos_in_S[ridx[e2]];
          if (q < 0) continue;
          double a = sign * rval[e2];
          const double* wq = &winv[static_cast<std::size_t>(q) * t];
          for (int p = 0; p < t; ++p) h[p] += a * wq[p];
        }
      };
      accum_row(r_out, 1.0);
      accum_row(r_in, -1.0);
      double denom = 1.0 + h[p_in];
      if (std::abs(denom) < kPivotTol) return false;
      std::vector<double> ucol(t);
      for (int a = 0; a < t; ++a) ucol[a] = winv[static_cast<std::size_t>(a) * t + p_in];
      for (int a = 0; a < t; ++a) {
        double f = ucol[a] / denom;
        if (f == 0.0) continue;
        double* wa = &winv[static_cast<std::size_t>(a) * t];
        for (int p = 0; p < t; ++p) wa[p] -= f * h[p];
      }
      owner[r_out] = -1;
      pos_in_P[r_out] = p_in;
      P[p_in] = r_out;
      pos_in_P[r_in] = -1;
      owner[r_in] = e;
    }

    stat[e] = VStat::Basic;
    stat[l] = leave_stat;
    ++pivots_total;
    ++pivots_this_solve;
    if (--refactor_countdown <= 0) {
      if (!refactorize()) return false;
    }
    return true;
  }

  // ---- shared pieces -------------------------------------------------------

  template <typename CostFn>
  void reduced_costs(CostFn cb, std::vector<double>& y, std::vector<double>& rc) const {
    btran(cb, y);
    int nv = num_vars_internal();
    rc.assign(nv, 0.0);
    for (int v = 0; v < nv; ++v) {
      if (stat[v] == VStat::Basic) continue;
      rc[v] = cb(v) - dot_column(y, v);
    }
  }

  bool is_fixed(int v) const { return lo[v] == up[v]; }

  double phase2_cost(int v) const { return v < ns ? cost[v] : 0.0; }

  bool dual_feasible_now() {
    std::vector<double> y, rc;
    reduced_costs([this](int v) { return phase2_cost(v); }, y, rc);
    int nv = num_vars_internal();
    for (int v = 0; v < nv; ++v) {
      if (stat[v] == VStat::Basic || is_fixed(v)) continue;
      double tol = kDualTol * (1.0 + std::abs(phase2_cost(v)));
      if (stat[v] == VStat::AtLower && rc[v] < -tol) return false;
      if (stat[v] == VStat::AtUpper && rc[v] > tol) return false;
      if (stat[v] == VStat::FreeNB && std::abs(rc[v]) > tol) return false;
    }
    return true;
  }

  bool primal_feasible_now() {
    compute_basic_values();
    int nv = num_vars_internal();
    for (int v = 0; v < nv; ++v) {
      if (stat[v] != VStat::Basic) continue;
      double s = 1.0 + std::abs(xval[v]);
      if (xval[v] < lo[v] - kFeasTol * s || xval[v] > up[v] + kFeasTol * s) return false;
    }
    return true;
  }

  // sup over the variable box of ray'Ax, minus nothing; used to certify rays.
  double certificate_value(const std::vector<double>& y) const {
    KahanSum val;
    for (int k = 0; k < num_rows; ++k) val.add(y[k] * rhs[k]);
    int nv = num_vars_internal();
    for (int v = 0; v < nv; ++v) {
      if (v >= ns && unit_row[v] >= 0 && artificial_of[unit_row[v]] == v) continue;
      double tA = dot_column(y, v);
      double contrib;
      if (tA > kZero) {
        if (!finite(up[v])) return -kInf;
        contrib = tA * up[v];
      } else if (tA < -kZero) {
        if (!finite(lo[v])) return -kInf;
        contrib = tA * lo[v];
      } else {
        contrib = 0.0;
      }
      val.add(-contrib);
    }
    return val.value();
  }

  LpSolution make_infeasible(std::vector<double> ray) {
    double scale = 0.0;
    for (double r : ray) scale = std::max(scale, std::abs(r));
    if (scale > 0.0)
      for (double& r : ray) r /= scale;
    LpSolution sol;
    double val = certificate_value(ray);
    if (!(val > 1e-9)) {
      sol.status = SolveStatus::PivotLimit;  // could not certify
      sol.pivots = pivots_this_solve;
      return sol;
    }
    sol.status = SolveStatus::Infeasible;
    sol.farkas_row = std::move(ray);
    sol.pivots = pivots_this_solve;
    return sol;
  }

  LpSolution extract_optimal() {
    compute_basic_values();
    LpSolution sol;
    sol.status = SolveStatus::Optimal;
    sol.x.assign(ns, 0.0);
    for (int j = 0; j < ns; ++j) sol.x[j] = xval[j];
    KahanSum obj;
    for (int j = 0; j < ns; ++j)
      if (sol.x[j] != 0.0) obj.add(cost[j] * sol.x[j]);
    sol.objective = obj.value();
    std::vector<double> y, rc;
    reduced_costs([this](int v) { return phase2_cost(v); }, y, rc);
    sol.row_dual = std::move(y);
    sol.reduced_cost.assign(rc.begin(), rc.begin() + ns);
    sol.pivots = pivots_this_solve;
    return sol;
  }

  // ---- dual simplex --------------------------------------------------------

  // Requires a dual-feasible basis. Returns Optimal, Infeasible, or
  // PivotLimit (caller may retry with the primal method).
  LpSolution dual_simplex() {
    int nv = num_vars_internal();
    std::vector<double> y, rc, pr;
    std::vector<double> aS, aO;
    int stall_refactors = 0;
    for (;;) {
      if (pivots_this_solve > hard_limit) return fail();
      bool bland = pivots_this_solve > bland_threshold;
      compute_basic_values();

      // leaving: most violated basic, violation relative to the variable's
      // own magnitude (Bland: lowest index violated)
      int l = -1;
      double worst = 0.0;
      for (int v = 0; v < nv; ++v) {
        if (stat[v] != VStat::Basic) continue;
        double raw = std::max(lo[v] - xval[v], xval[v] - up[v]);
        if (raw <= 0.0) continue;
        double viol = raw / (1.0 + std::abs(xval[v]));
        if (viol > std::max(worst, kFeasTol)) {
          l = v;
          if (bland) break;
          worst = viol;
        }
      }
      if (l == -1) {
        LpSolution sol = extract_optimal();
        if (!verify_optimal(sol)) {
          if (++stall_refactors <= 2 && refactorize()) continue;
          return fail();
        }
        return sol;
      }

      bool need_increase = xval[l] < lo[l];
      btran_unit(l, pr);
      reduced_costs([this](int v) { return phase2_cost(v); }, y, rc);

      int e = -1;
      double best_ratio = kInf, best_alpha = 0.0;
      for (int v = 0; v < nv; ++v) {
        if (stat[v] == VStat::Basic || is_fixed(v)) continue;
        double a = dot_column(pr, v);
        if (std::abs(a) <= kPivotTol) continue;
        bool ok = false;
        if (stat[v] == VStat::FreeNB) ok = true;
        else if (need_increase) ok = (stat[v] == VStat::AtLower && a < 0.0) ||
                                     (stat[v] == VStat::AtUpper && a > 0.0);
        else ok = (stat[v] == VStat::AtLower && a > 0.0) ||
                  (stat[v] == VStat::AtUpper && a < 0.0);
        if (!ok) continue;
        double ratio = std::abs(rc[v] / a);
        bool better;
        if (bland) better = (e == -1) || (ratio < best_ratio - kZero) ||
                            (ratio < best_ratio + kZero && v < e);
        else better = (e == -1) || (ratio < best_ratio - kZero) ||
                      (std::abs(ratio - best_ratio) <= kZero && std::abs(a) > std::abs(best_alpha));
        if (better) { e = v; best_ratio = ratio; best_alpha = a; }
      }

      if (e == -1) {
        // no entering candidate: row combination proves infeasibility
        double sigma = need_increase ? -1.0 : 1.0;
        std::vector<double> ray(num_rows);
        for (int k = 0; k < num_rows; ++k) ray[k] = sigma * pr[k];
        LpSolution sol = make_infeasible(std::move(ray));
        if (sol.status == SolveStatus::Infeasible) return sol;
        if (++stall_refactors <= 2 && refactorize()) continue;
        return fail();
      }

      ftran_column(e, aS, aO);
      VStat leave_stat = need_increase ? VStat::AtLower : VStat::AtUpper;
      if (is_fixed(l)) leave_stat = VStat::AtLower;
      if (!pivot(e, l, leave_stat, aS, aO)) {
        if (++stall_refactors <= 3 && refactorize()) continue;
        return fail();
      }
    }
  }

  // ---- primal simplex ------------------------------------------------------

  // Runs one primal phase to optimality for the given cost function.
  // Status: 0 optimal, 1 unbounded, 2 numerical failure.
  template <typename CostFn>
  int primal_phase(CostFn cb) {
    int nv = num_vars_internal();
    std::vector<double> y, rc;
    std::vector<double> aS, aO;
    int stall_refactors = 0;
    for (;;) {
      if (pivots_this_solve > hard_limit) return 2;
      bool bland = pivots_this_solve > bland_threshold;
      compute_basic_values();
      reduced_costs(cb, y, rc);

      int e = -1;
      double worst = kDualTol;
      int dir = +1;
      for (int v = 0; v < nv; ++v) {
        if (stat[v] == VStat::Basic || is_fixed(v)) continue;
        double viol = 0.0;
        int d = +1;
        if (stat[v] == VStat::AtLower && rc[v] < -worst) { viol = -rc[v]; d = +1; }
        else if (stat[v] == VStat::AtUpper && rc[v] > worst) { viol = rc[v]; d = -1; }
        else if (stat[v] == VStat::FreeNB && std::abs(rc[v]) > worst) {
          viol = std::abs(rc[v]);
          d = rc[v] < 0 ? +1 : -1;
        } else continue;
        if (e == -1 || viol > worst) {
          e = v; dir = d;
          if (bland) break;
          worst = viol;
        }
      }
      if (e == -1) return 0;

      ftran_column(e, aS, aO);
      // ratio test: basics move at rate -dir*alpha
      double t_best = kInf;
      int l = -1;
      double l_rate = 0.0;
      VStat l_stat = VStat::AtLower;
      auto consider = [&](int v, double alpha) {
        double rate = -dir * alpha;
        if (rate > kPivotTol) {
          if (!finite(up[v])) return;
          double tb = std::max(0.0, (up[v] - xval[v]) / rate);
          bool better = tb < t_best - kZero ||
                        (tb < t_best + kZero &&
                         (l == -1 || (bland ? v < l : std::abs(rate) > std::abs(l_rate))));
          if (better) { t_best = tb; l = v; l_rate = rate; l_stat = VStat::AtUpper; }
        } else if (rate < -kPivotTol) {
          if (!finite(lo[v])) return;
          double tb = std::max(0.0, (xval[v] - lo[v]) / (-rate));
          bool better = tb < t_best - kZero ||
                        (tb < t_best + kZero &&
                         (l == -1 || (bland ? v < l : std::abs(rate) > std::abs(l_rate))));
          if (better) { t_best = tb; l = v; l_rate = rate; l_stat = VStat::AtLower; }
        }
      };
      for (std::size_t q = 0; q < S.size(); ++q) consider(S[q], aS[q]);
      for (int k = 0; k < num_rows; ++k)
        if (owner[k] >= 0) consider(owner[k], aO[k]);

      double span = (finite(lo[e]) && finite(up[e])) ? up[e] - lo[e] : kInf;
      if (span < t_best - kZero) {
        // bound flip, no basis change
        stat[e] = stat[e] == VStat::AtLower ? VStat::AtUpper : VStat::AtLower;
        ++pivots_this_solve;
        ++pivots_total;
        continue;
      }
      if (!finite(t_best)) return 1;  // unbounded direction
      if (!pivot(e, l, l_stat, aS, aO)) {
        if (++stall_refactors <= 3 && refactorize()) continue;
        return 2;
      }
    }
  }

  LpSolution primal_two_phase() {
    reset_to_logical_basis();
    compute_basic_values();

    // activate artificials on rows whose logical cannot absorb the residual
    bool need_phase1 = false;
    for (int k = 0; k < num_rows; ++k) {
      int lg = logical_of[k];
      double v = xval[lg];
      double s = 1.0 + std::abs(v);
      if (v >= lo[lg] - kFeasTol * s && v <= up[lg] + kFeasTol * s) continue;
      need_phase1 = true;
      double nearest = v > up[lg] ? up[lg] : lo[lg];
      stat[lg] = nearest == up[lg] ? VStat::AtUpper : VStat::AtLower;
      double resid = v - nearest;
      int a = artificial_of[k];
      lo[a] = 0.0;
      up[a] = kInf;
      unit_coef[a] = resid >= 0 ? 1.0 : -1.0;
      stat[a] = VStat::Basic;
    }
    if (need_phase1) {
      if (!refactorize()) return fail();
      auto art_cost = [this](int v) {
        return (v >= ns && unit_row[v] >= 0 && artificial_of[unit_row[v]] == v && up[v] > 0.0)
                   ? 1.0
                   : 0.0;
      };
      int st = primal_phase(art_cost);
      if (st != 0) return fail();
      // remaining artificial value, per row relative to that row's scale
      compute_basic_values();
      double infeas = 0.0;
      for (int k = 0; k < num_rows; ++k) {
        int a = artificial_of[k];
        if (up[a] > 0.0)
          infeas = std::max(infeas, std::max(0.0, xval[a]) / (1.0 + std::abs(rhs[k])));
      }
      if (infeas > 1e-8) {
        std::vector<double> y;
        btran(art_cost, y);
        LpSolution sol = make_infeasible(std::move(y));
        if (sol.status == SolveStatus::Infeasible) return sol;
        return fail();
      }
      // retire artificials
      for (int k = 0; k < num_rows; ++k) {
        int a = artificial_of[k];
        lo[a] = up[a] = 0.0;
      }
    }

    int st = primal_phase([this](int v) { return phase2_cost(v); });
    if (st == 1) {
      LpSolution sol;
      sol.status = SolveStatus::Unbounded;
      sol.pivots = pivots_this_solve;
      return sol;
    }
    if (st == 2) return fail();
    LpSolution sol = extract_optimal();
    if (!verify_optimal(sol)) return fail();
    return sol;
  }

  // ---- validation + driver -------------------------------------------------

  double rhs_scale_ = 0.0;

  bool verify_optimal(const LpSolution& sol) {
    // primal residuals on every row
    for (int k = 0; k < num_rows; ++k) {
      KahanSum act;
      for (int e = rptr[k]; e < rptr[k + 1]; ++e) act.add(rval[e] * sol.x[ridx[e]]);
      int lg = logical_of[k];
      double slack = rhs[k] - act.value();  // must lie within logical bounds
      double s = 1.0 + std::abs(rhs[k]) + std::abs(act.value());
      if (slack < lo[lg] - 1e-7 * s || slack > up[lg] + 1e-7 * s) return false;
    }
    // variable bounds
    for (int j = 0; j < ns; ++j) {
      double s = 1.0 + std::abs(sol.x[j]);
      if (sol.x[j] < lo[j] - 1e-7 * s || sol.x[j] > up[j] + 1e-7 * s) return false;
    }
    // dual feasibility of reported multipliers
    for (int j = 0; j < ns; ++j) {
      if (stat[j] == VStat::Basic || is_fixed(j)) continue;
      double s = 1e-6 * (1.0 + std::abs(cost[j]));
      if (stat[j] == VStat::AtLower && sol.reduced_cost[j] < -s) return false;
      if (stat[j] == VStat::AtUpper && sol.reduced_cost[j] > s) return false;
    }
    return true;
  }

  LpSolution fail() {
    LpSolution sol;
    sol.status = SolveStatus::PivotLimit;
    sol.pivots = pivots_this_solve;
    return sol;
  }

  void ftran_column(int e, std::vector<double>& aS, std::vector<double>& aO) {
    std::vector<double> col(num_rows, 0.0);
    if (unit_row[e] >= 0) col[unit_row[e]] = unit_coef[e];
    else
      for (int k = cptr[e]; k < cptr[e + 1]; ++k) col[cidx[k]] = cval[k];
    ftran(col, aS, aO);
  }

  LpSolution run(bool have_warm) {
    if (columns_dirty) rebuild_columns();
    int nv = num_vars_internal();
    xval.assign(nv, 0.0);
    pivots_this_solve = 0;
    bland_threshold = 10L * (num_rows + nv);
    hard_limit = std::max(200000L, 50L * bland_threshold);
    rhs_scale_ = 0.0;
    for (int k = 0; k < num_rows; ++k) rhs_scale_ = std::max(rhs_scale_, std::abs(rhs[k]));

    // dormant artificials must never carry state between solves
    for (int k = 0; k < num_rows; ++k) {
      int a = artificial_of[k];
      lo[a] = up[a] = 0.0;
      if (stat.size() == static_cast<std::size_t>(nv) && stat[a] == VStat::Basic)
        have_warm = false;  // stale snapshot from a phase-1 interior; drop it
    }

    bool basis_ok = false;
    if (have_warm && stat.size() == static_cast<std::size_t>(nv)) {
      // a nonbasic status pointing at an infinite bound is meaningless
      for (int v = 0; v < nv; ++v) {
        if (stat[v] == VStat::Basic) continue;
        if ((stat[v] == VStat::AtLower && !finite(lo[v])) ||
            (stat[v] == VStat::AtUpper && !finite(up[v])))
          set_nonbasic_at_preferred(v);
      }
      basis_ok = refactorize();
    }
    if (!basis_ok) reset_to_logical_basis();

    if (dual_feasible_now()) {
      LpSolution sol = dual_simplex();
      if (sol.status != SolveStatus::PivotLimit) return sol;
    } else if (primal_feasible_now()) {
      int st = primal_phase([this](int v) { return phase2_cost(v); });
      if (st == 0) {
        LpSolution sol = extract_optimal();
        if (verify_optimal(sol)) return sol;
      } else if (st == 1) {
        LpSolution sol;
        sol.status = SolveStatus::Unbounded;
        sol.pivots = pivots_this_solve;
        return sol;
      }
    }
    return primal_two_phase();
  }
};

Simplex::Simplex(LinearProgram lp) : impl_(std::make_unique<Impl>(std::move(lp))) {}
Simplex::~Simplex() = default;
Simplex::Simplex(Simplex&&) noexcept = default;
Simplex& Simplex::operator=(Simplex&&) noexcept = default;

void Simplex::set_variable_bounds(int var, double lov, double upv) {
  impl_->lo[var] = lov;
  impl_->up[var] = upv;
}

int Simplex::add_constraint(Sense sense, double rhs, std::vector<std::pair<int, double>> coeffs) {
  LinearProgram::Row row{sense, rhs, std::move(coeffs)};
  impl_->append_row(row.sense, row.rhs, row.coeffs);
  return impl_->num_rows - 1;
}

LpSolution Simplex::solve() { return impl_->run(false); }

LpSolution Simplex::solve_primal() {
  auto& im = *impl_;
  if (im.columns_dirty) im.rebuild_columns();
  int nv = im.num_vars_internal();
  im.xval.assign(nv, 0.0);
  im.pivots_this_solve = 0;
  im.bland_threshold = 10L * (im.num_rows + nv);
  im.hard_limit = std::max(200000L, 50L * im.bland_threshold);
  im.rhs_scale_ = 0.0;
  for (int k = 0; k < im.num_rows; ++k)
    im.rhs_scale_ = std::max(im.rhs_scale_, std::abs(im.rhs[k]));
  for (int k = 0; k < im.num_rows; ++k) {
    int a = im.artificial_of[k];
    im.lo[a] = im.up[a] = 0.0;
  }
  return im.primal_two_phase();
}

LpSolution Simplex::solve_from(const BasisState& basis) {
  auto& im = *impl_;
  int nv = im.num_vars_internal();
  im.stat.assign(nv, VStat::AtLower);
  for (int j = 0; j < im.ns; ++j) im.set_nonbasic_at_preferred(j);
  for (int k = 0; k < im.num_rows; ++k) {
    im.stat[im.artificial_of[k]] = VStat::AtLower;
    std::size_t ext = static_cast<std::size_t>(im.ns) + k;
    VStat st = ext < basis.size() ? static_cast<VStat>(basis[ext]) : VStat::Basic;
    im.stat[im.logical_of[k]] = st;
  }
  for (int j = 0; j < im.ns && static_cast<std::size_t>(j) < basis.size(); ++j)
    im.stat[j] = static_cast<VStat>(basis[j]);
  return im.run(true);
}

BasisState Simplex::basis() const {
  auto& im = *impl_;
  BasisState b(static_cast<std::size_t>(im.ns) + im.num_rows,
               static_cast<std::uint8_t>(VStat::AtLower));
  for (int j = 0; j < im.ns; ++j) b[j] = static_cast<std::uint8_t>(im.stat[j]);
  for (int k = 0; k < im.num_rows; ++k)
    b[static_cast<std::size_t>(im.ns) + k] = static_cast<std::uint8_t>(im.stat[im.logical_of[k]]);
  return b;
}

LpSolution solve_lp(const LinearProgram& lp) {
  Simplex s(lp);
  return s.solve();
}

}  // namespace cflp::lp
