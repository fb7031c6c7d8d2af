#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "zeroext/instance.hpp"
#include "zeroext/modular.hpp"

namespace zeroext {

enum class Rel { LE, EQ, GE };

// Minimization problem over exact rationals. Every variable has a lower bound
// (zero by default) and no upper bound.
struct LinearProgram {
  int num_vars = 0;
  std::vector<Rat> objective;
  struct Row {
    std::vector<Rat> coef;
    Rel rel = Rel::LE;
    Rat rhs;
  };
  std::vector<Row> rows;
  std::vector<Rat> lower;  // resized to num_vars, default 0

  int add_var(const Rat& cost) {
    objective.push_back(cost);
    lower.push_back(Rat(0));
    return num_vars++;
  }
};

struct LpSolution {
  Rat value;
  std::vector<Rat> x;
};

namespace detail {

// Dense two-phase simplex with Bland's pivoting rule; exact and deterministic.
class Simplex {
 public:
  explicit Simplex(const LinearProgram& lp) : lp_(lp) {
    n_struct_ = lp.num_vars;
    // Shift variables to their lower bounds, add slack columns, normalize rhs
    // signs, then attach artificial columns where no slack can start basic.
    for (const auto& row : lp.rows) {
      std::vector<Rat> a(row.coef);
      if (static_cast<int>(a.size()) != n_struct_) fail("BadLp", "row width mismatch");
      Rat b = row.rhs;
      for (int j = 0; j < n_struct_; ++j) b -= a[j] * lp.lower[j];
      rows_.push_back(std::move(a));
      rhs_.push_back(b);
      rel_.push_back(row.rel);
    }
    int m = static_cast<int>(rows_.size());
    n_total_ = n_struct_;
    slack_col_.assign(m, -1);
    for (int i = 0; i < m; ++i)
      if (rel_[i] != Rel::EQ) slack_col_[i] = n_total_++;
    for (int i = 0; i < m; ++i) {
      for (auto& r : rows_) r.resize(n_total_, Rat(0));
    }
    for (int i = 0; i < m; ++i)
      if (slack_col_[i] >= 0) rows_[i][slack_col_[i]] = rel_[i] == Rel::LE ? Rat(1) : Rat(-1);
    for (int i = 0; i < m; ++i)
      if (rhs_[i].sign() < 0) {
        for (auto& v : rows_[i]) v = -v;
        rhs_[i] = -rhs_[i];
      }
    basis_.assign(m, -1);
    for (int i = 0; i < m; ++i)
      if (slack_col_[i] >= 0 && rows_[i][slack_col_[i]] == Rat(1)) basis_[i] = slack_col_[i];
    first_artificial_ = n_total_;
    for (int i = 0; i < m; ++i)
      if (basis_[i] < 0) {
        int col = n_total_++;
        for (auto& r : rows_) r.push_back(Rat(0));
        rows_[i][col] = Rat(1);
        basis_[i] = col;
      }
  }

  LpSolution solve() {
    int m = static_cast<int>(rows_.size());
    // Phase 1: drive artificials to zero.
    if (first_artificial_ < n_total_) {
      std::vector<Rat> cost(n_total_, Rat(0));
      for (int j = first_artificial_; j < n_total_; ++j) cost[j] = Rat(1);
      set_cost(cost);
      run(n_total_);
      if (obj_.sign() != 0) fail("Infeasible", "no feasible point");
      for (int i = 0; i < m; ++i) {
        if (basis_[i] < first_artificial_) continue;
        int piv = -1;
        for (int j = 0; j < first_artificial_ && piv < 0; ++j)
          if (rows_[i][j].sign() != 0) piv = j;
        if (piv >= 0)
          pivot(i, piv);
        else
          dead_row_[i] = true;  // redundant constraint
      }
    }
    // Phase 2: original objective over non-artificial columns.
    std::vector<Rat> cost(n_total_, Rat(0));
    for (int j = 0; j < n_struct_; ++j) cost[j] = lp_.objective[j];
    set_cost(cost);
    run(first_artificial_);
    LpSolution sol;
    sol.x.assign(n_struct_, Rat(0));
    for (int i = 0; i < m; ++i)
      if (!dead_row_[i] && basis_[i] < n_struct_) sol.x[basis_[i]] = rhs_[i];
    sol.value = Rat(0);
    for (int j = 0; j < n_struct_; ++j) {
      sol.x[j] += lp_.lower[j];
      sol.value += lp_.objective[j] * sol.x[j];
    }
    return sol;
  }

 private:
  void set_cost(const std::vector<Rat>& cost) {
    int m = static_cast<int>(rows_.size());
    if (dead_row_.empty()) dead_row_.assign(m, false);
    red_ = cost;
    obj_ = Rat(0);
    for (int i = 0; i < m; ++i) {
      if (dead_row_[i]) continue;
      const Rat& cb = cost[basis_[i]];
      if (cb.sign() == 0) continue;
      for (int j = 0; j < n_total_; ++j) red_[j] -= cb * rows_[i][j];
      obj_ += cb * rhs_[i];
    }
  }

  void pivot(int r, int c) {
    Rat p = rows_[r][c];
    for (auto& v : rows_[r]) v /= p;
    rhs_[r] /= p;
    int m = static_cast<int>(rows_.size());
    for (int i = 0; i < m; ++i) {
      if (i == r || dead_row_[i]) continue;
      Rat f = rows_[i][c];
      if (f.sign() == 0) continue;
      for (int j = 0; j < n_total_; ++j) rows_[i][j] -= f * rows_[r][j];
      rhs_[i] -= f * rhs_[r];
    }
    Rat f = red_[c];
    if (f.sign() != 0) {
      for (int j = 0; j < n_total_; ++j) red_[j] -= f * rows_[r][j];
      obj_ += f * rhs_[r];
    }
    basis_[r] = c;
  }

  void run(int ncols) {
    int m = static_cast<int>(rows_.size());
    while (true) {
      int enter = -1;
      for (int j = 0; j < ncols && enter < 0; ++j)
        if (red_[j].sign() < 0) enter = j;
      if (enter < 0) return;
      int leave = -1;
      Rat best;
      for (int i = 0; i < m; ++i) {
        if (dead_row_[i] || rows_[i][enter].sign() <= 0) continue;
        Rat ratio = rhs_[i] / rows_[i][enter];
        if (leave < 0 || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) fail("Unbounded", "objective unbounded below");
      pivot(leave, enter);
    }
  }

  const LinearProgram& lp_;
  int n_struct_ = 0;
  int n_total_ = 0;
  int first_artificial_ = 0;
  std::vector<std::vector<Rat>> rows_;
  std::vector<Rat> rhs_;
  std::vector<Rel> rel_;
  std::vector<int> slack_col_;
  std::vector<int> basis_;
  std::vector<bool> dead_row_;
  std::vector<Rat> red_;
  Rat obj_;
};

}  // namespace detail

inline LpSolution solve_lp(const LinearProgram& lp) {
  detail::Simplex s(lp);
  return s.solve();
}

struct ExtensionRelaxation {
  Instance instance;
  LinearProgram lp;
  Rat tau_star;
  FiniteMetric m_star;  // optimal metric extension on all of V
};

// Relaxation of the assignment problem: minimize c*m over metric extensions
// of the terminal metric, dropping the zero-distance requirement. Variables
// exist only for pairs touching a free point; terminal pairs are constants.
inline ExtensionRelaxation extension_lp(const Instance& inst) {
  inst.validate();
  ExtensionRelaxation rel;
  rel.instance = inst;
  const auto& V = inst.points;
  int n = static_cast<int>(V.size());
  std::map<PointPair, int> var;
  Rat constant(0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      bool ti = inst.is_terminal(V[i]), tj = inst.is_terminal(V[j]);
      if (ti && tj) {
        constant += inst.c(V[i], V[j]) * inst.mu.at(V[i], V[j]);
      } else {
        var[make_pair_key(V[i], V[j])] = rel.lp.add_var(inst.c(V[i], V[j]));
      }
    }
  auto entry = [&](const std::string& a, const std::string& b, std::vector<Rat>* coef,
                   Rat* rhs, int sgn) {
    // Adds sgn * m(ab) to the row's left side.
    auto it = var.find(make_pair_key(a, b));
    if (it != var.end())
      (*coef)[it->second] += Rat(sgn);
    else
      *rhs -= Rat(sgn) * inst.mu.at(a, b);
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        if (inst.is_terminal(V[i]) && inst.is_terminal(V[j]) && inst.is_terminal(V[k]))
          continue;
        const std::string tri[3] = {V[i], V[j], V[k]};
        for (int drop = 0; drop < 3; ++drop) {
          // m(ab) + m(bc) >= m(ac) where {a,c} is the pair opposite 'drop'.
          const std::string& a = tri[(drop + 1) % 3];
          const std::string& b = tri[drop];
          const std::string& c = tri[(drop + 2) % 3];
          LinearProgram::Row row;
          row.coef.assign(rel.lp.num_vars, Rat(0));
          row.rel = Rel::GE;
          row.rhs = Rat(0);
          entry(a, b, &row.coef, &row.rhs, 1);
          entry(b, c, &row.coef, &row.rhs, 1);
          entry(a, c, &row.coef, &row.rhs, -1);
          bool all_const = true;
          for (const Rat& v : row.coef)
            if (v.sign() != 0) all_const = false;
          if (!all_const) rel.lp.rows.push_back(std::move(row));
        }
      }
  for (auto& row : rel.lp.rows) row.coef.resize(rel.lp.num_vars, Rat(0));
  LpSolution sol = solve_lp(rel.lp);
  rel.tau_star = sol.value + constant;
  std::vector<std::vector<Rat>> d(n, std::vector<Rat>(n, Rat(0)));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      auto it = var.find(make_pair_key(V[i], V[j]));
      d[i][j] = d[j][i] = it != var.end() ? sol.x[it->second] : inst.mu.at(V[i], V[j]);
    }
  rel.m_star = FiniteMetric(V, std::move(d));
  return rel;
}

namespace detail {

// Merge a free point into a terminal by moving its cost rows there.
inline Instance pin_point(const Instance& inst, const std::string& x, const std::string& t) {
  Instance out;
  out.mu = inst.mu;
  for (const std::string& p : inst.points)
    if (p != x) out.points.push_back(p);
  for (const auto& [key, w] : inst.cost) {
    std::string a = key.first, b = key.second;
    if (a == x) a = t;
    if (b == x) b = t;
    if (a != b) out.add_cost(a, b, w);
  }
  return out;
}

}  // namespace detail

// Self-reduction for metrics where the relaxation is exact: pin free points
// one at a time, keeping the relaxation value unchanged. A point already at
// zero distance from a terminal in the current optimal extension can be
// pinned there directly; otherwise candidate pins are re-solved.
inline ZeroExtension solve_minimizable(const Instance& inst) {
  inst.validate();
  {
    MetricClassification cls = classify(inst.mu);
    if (!cls.minimizable()) fail("NotMinimizable", "metric is not modular with a frame graph");
  }
  ExtensionRelaxation cur = extension_lp(inst);
  const Rat target = cur.tau_star;
  ZeroExtension z;
  for (const std::string& t : inst.terminals()) z.assign[t] = t;
  Instance work = inst;
  for (const std::string& x : inst.free_points()) {
    std::string chosen;
    for (const std::string& t : work.terminals())
      if (cur.m_star.at(x, t).is_zero()) {
        chosen = t;
        break;
      }
    if (!chosen.empty()) {
      // The current optimal extension already identifies x with the terminal,
      // so merging keeps the relaxation value; no re-solve needed.
      work = detail::pin_point(work, x, chosen);
      std::vector<std::vector<Rat>> d;
      int n = static_cast<int>(work.points.size());
      d.assign(n, std::vector<Rat>(n));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) d[i][j] = cur.m_star.at(work.points[i], work.points[j]);
      cur.m_star = FiniteMetric(work.points, std::move(d));
      cur.tau_star = target;
    } else {
      for (const std::string& t : work.terminals()) {
        Instance cand = detail::pin_point(work, x, t);
        ExtensionRelaxation r = extension_lp(cand);
        if (r.tau_star == target) {
          chosen = t;
          work = std::move(cand);
          cur = std::move(r);
          break;
        }
      }
      if (chosen.empty())
        fail("NoPinPossible", "no pin of '" + x + "' preserves the relaxation value");
    }
    z.assign[x] = chosen;
  }
  validate_zero_extension(inst, z);
  if (zero_extension_cost(inst, z) != target)
    fail("NoPinPossible", "pinned assignment misses the relaxation value");
  return z;
}

}  // namespace zeroext
