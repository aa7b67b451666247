#include "tsmstress/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "tsmstress/text.hpp"

namespace tsmstress {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kFeasTol = 1e-7;

struct StdRow {
  std::vector<double> a;  // dense over structural vars
  RowRel rel = RowRel::LE;
  double b = 0.0;
};

// Dense primal simplex, Bland's rule throughout (anti-cycling, deterministic).
class Tableau {
 public:
  enum class Status { Optimal, Infeasible, Unbounded };

  Status phase1(int nStruct, std::vector<StdRow> rows) {
    nStruct_ = nStruct;
    m_ = static_cast<int>(rows.size());
    for (auto& r : rows) {
      r.a.resize(static_cast<size_t>(nStruct_), 0.0);
      if (r.b < 0.0) {
        for (auto& v : r.a) v = -v;
        r.b = -r.b;
        r.rel = r.rel == RowRel::LE ? RowRel::GE : (r.rel == RowRel::GE ? RowRel::LE : RowRel::EQ);
      }
    }
    int nSlack = 0, nArt = 0;
    for (const auto& r : rows) {
      if (r.rel != RowRel::EQ) ++nSlack;
      if (r.rel != RowRel::LE) ++nArt;
    }
    n_ = nStruct_ + nSlack + nArt;
    T_.assign(static_cast<size_t>(m_), std::vector<double>(static_cast<size_t>(n_) + 1, 0.0));
    basis_.assign(static_cast<size_t>(m_), -1);
    artCol_.assign(static_cast<size_t>(n_), false);
    int slack = nStruct_, art = nStruct_ + nSlack;
    for (int i = 0; i < m_; ++i) {
      auto& row = T_[static_cast<size_t>(i)];
      for (int j = 0; j < nStruct_; ++j) row[static_cast<size_t>(j)] = rows[static_cast<size_t>(i)].a[static_cast<size_t>(j)];
      row[static_cast<size_t>(n_)] = rows[static_cast<size_t>(i)].b;
      switch (rows[static_cast<size_t>(i)].rel) {
        case RowRel::LE:
          row[static_cast<size_t>(slack)] = 1.0;
          basis_[static_cast<size_t>(i)] = slack++;
          break;
        case RowRel::GE:
          row[static_cast<size_t>(slack++)] = -1.0;
          row[static_cast<size_t>(art)] = 1.0;
          artCol_[static_cast<size_t>(art)] = true;
          basis_[static_cast<size_t>(i)] = art++;
          break;
        case RowRel::EQ:
          row[static_cast<size_t>(art)] = 1.0;
          artCol_[static_cast<size_t>(art)] = true;
          basis_[static_cast<size_t>(i)] = art++;
          break;
      }
    }
    // maximize minus the artificial sum
    std::vector<double> c(static_cast<size_t>(n_), 0.0);
    for (int j = 0; j < n_; ++j)
      if (artCol_[static_cast<size_t>(j)]) c[static_cast<size_t>(j)] = -1.0;
    loadObjective(c);
    iterate();
    if (Z_[static_cast<size_t>(n_)] < -kFeasTol) return Status::Infeasible;
    purgeArtificials();
    return Status::Optimal;
  }

  Status phase2(std::vector<double> structObjective) {
    structObjective.resize(static_cast<size_t>(n_), 0.0);
    loadObjective(structObjective);
    return iterate();
  }

  std::vector<double> structural() const {
    std::vector<double> x(static_cast<size_t>(nStruct_), 0.0);
    for (int i = 0; i < m_; ++i)
      if (basis_[static_cast<size_t>(i)] < nStruct_)
        x[static_cast<size_t>(basis_[static_cast<size_t>(i)])] = T_[static_cast<size_t>(i)][static_cast<size_t>(n_)];
    return x;
  }

  double objective() const { return Z_[static_cast<size_t>(n_)]; }

 private:
  void loadObjective(const std::vector<double>& c) {
    Z_.assign(static_cast<size_t>(n_) + 1, 0.0);
    for (int j = 0; j < n_; ++j) Z_[static_cast<size_t>(j)] = -c[static_cast<size_t>(j)];
    for (int i = 0; i < m_; ++i) {
      double cb = c[static_cast<size_t>(basis_[static_cast<size_t>(i)])];
      if (cb != 0.0)
        for (int j = 0; j <= n_; ++j) Z_[static_cast<size_t>(j)] += cb * T_[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }
  }

  Status iterate() {
    for (;;) {
      int enter = -1;
      for (int j = 0; j < n_; ++j) {
        if (banned_.size() == static_cast<size_t>(n_) && banned_[static_cast<size_t>(j)]) continue;
        if (Z_[static_cast<size_t>(j)] < -kPivotTol) {
          enter = j;
          break;  // Bland: first improving column
        }
      }
      if (enter < 0) return Status::Optimal;
      int leave = -1;
      double bestRatio = 0.0;
      for (int i = 0; i < m_; ++i) {
        double a = T_[static_cast<size_t>(i)][static_cast<size_t>(enter)];
        if (a > kPivotTol) {
          double ratio = T_[static_cast<size_t>(i)][static_cast<size_t>(n_)] / a;
          if (leave < 0 || ratio < bestRatio - kPivotTol ||
              (ratio < bestRatio + kPivotTol && basis_[static_cast<size_t>(i)] < basis_[static_cast<size_t>(leave)]))
            leave = i, bestRatio = ratio;
        }
      }
      if (leave < 0) return Status::Unbounded;
      pivot(leave, enter);
    }
  }

  void pivot(int r, int e) {
    auto& prow = T_[static_cast<size_t>(r)];
    double inv = 1.0 / prow[static_cast<size_t>(e)];
    for (auto& v : prow) v *= inv;
    prow[static_cast<size_t>(e)] = 1.0;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      double f = T_[static_cast<size_t>(i)][static_cast<size_t>(e)];
      if (std::abs(f) > 0.0) {
        auto& row = T_[static_cast<size_t>(i)];
        for (int j = 0; j <= n_; ++j) row[static_cast<size_t>(j)] -= f * prow[static_cast<size_t>(j)];
        row[static_cast<size_t>(e)] = 0.0;
      }
    }
    double f = Z_[static_cast<size_t>(e)];
    if (std::abs(f) > 0.0) {
      for (int j = 0; j <= n_; ++j) Z_[static_cast<size_t>(j)] -= f * prow[static_cast<size_t>(j)];
      Z_[static_cast<size_t>(e)] = 0.0;
    }
    basis_[static_cast<size_t>(r)] = e;
  }

  void purgeArtificials() {
    // Drive basic artificials out; rows that cannot pivot are redundant.
    for (int i = m_ - 1; i >= 0; --i) {
      int bv = basis_[static_cast<size_t>(i)];
      if (!artCol_[static_cast<size_t>(bv)]) continue;
      int col = -1;
      for (int j = 0; j < n_; ++j)
        if (!artCol_[static_cast<size_t>(j)] && std::abs(T_[static_cast<size_t>(i)][static_cast<size_t>(j)]) > kPivotTol) {
          col = j;
          break;
        }
      if (col >= 0) {
        pivot(i, col);
      } else {
        T_.erase(T_.begin() + i);
        basis_.erase(basis_.begin() + i);
        --m_;
      }
    }
    banned_.assign(static_cast<size_t>(n_), false);
    for (int j = 0; j < n_; ++j) banned_[static_cast<size_t>(j)] = artCol_[static_cast<size_t>(j)];
  }

  int m_ = 0, n_ = 0, nStruct_ = 0;
  std::vector<std::vector<double>> T_;
  std::vector<double> Z_;
  std::vector<int> basis_;
  std::vector<bool> artCol_;
  std::vector<bool> banned_;
};

struct Prepared {
  int nv = 0;
  std::vector<StdRow> rows;
  std::vector<double> shift;
};

Prepared prepare(const LpProblem& p, const std::vector<int>* rowSubset) {
  Prepared out;
  out.nv = static_cast<int>(p.vars.size());
  out.shift.resize(p.vars.size());
  for (size_t j = 0; j < p.vars.size(); ++j) {
    const auto& v = p.vars[j];
    if (v.lo < 0.0) throw std::invalid_argument("lp: variable " + v.name + " has negative lower bound");
    if (v.hi < v.lo) throw std::invalid_argument("lp: variable " + v.name + " has empty range");
    out.shift[j] = v.lo;
  }
  auto addRow = [&](const LpRow& r) {
    StdRow s;
    s.a.assign(p.vars.size(), 0.0);
    s.b = r.rhs;
    s.rel = r.rel;
    for (const auto& [idx, c] : r.terms) {
      if (idx < 0 || idx >= out.nv) throw std::invalid_argument("lp: bad variable index in row " + r.name);
      s.a[static_cast<size_t>(idx)] += c;
      s.b -= c * out.shift[static_cast<size_t>(idx)];
    }
    out.rows.push_back(std::move(s));
  };
  if (rowSubset) {
    for (int r : *rowSubset) addRow(p.rows.at(static_cast<size_t>(r)));
  } else {
    for (const auto& r : p.rows) addRow(r);
  }
  for (size_t j = 0; j < p.vars.size(); ++j) {
    if (p.vars[j].hi != kNoBound) {
      StdRow s;
      s.a.assign(p.vars.size(), 0.0);
      s.a[j] = 1.0;
      s.rel = RowRel::LE;
      s.b = p.vars[j].hi - p.vars[j].lo;
      out.rows.push_back(std::move(s));
    }
  }
  return out;
}

bool feasible_subset(const LpProblem& p, const std::vector<int>& subset, std::vector<double>* x) {
  Prepared prep = prepare(p, &subset);
  Tableau t;
  if (t.phase1(prep.nv, prep.rows) != Tableau::Status::Optimal) return false;
  if (x) {
    *x = t.structural();
    for (size_t j = 0; j < x->size(); ++j) (*x)[j] += prep.shift[j];
  }
  return true;
}

double row_value(const LpRow& r, const std::vector<double>& x) {
  double v = 0.0;
  for (const auto& [idx, c] : r.terms) v += c * x.at(static_cast<size_t>(idx));
  return v;
}

bool row_satisfied(const LpRow& r, const std::vector<double>& x, double relTol) {
  double v = row_value(r, x);
  double slack = relTol * (1.0 + std::abs(r.rhs));
  switch (r.rel) {
    case RowRel::LE: return v <= r.rhs + slack;
    case RowRel::GE: return v >= r.rhs - slack;
    case RowRel::EQ: return std::abs(v - r.rhs) <= slack;
  }
  return false;
}

}  // namespace

int LpProblem::add_var(const std::string& name, double lo, double hi) {
  vars.push_back({name, lo, hi});
  if (!objective.empty()) objective.push_back(0.0);
  return static_cast<int>(vars.size()) - 1;
}

int LpProblem::var_index(const std::string& name) const {
  for (size_t j = 0; j < vars.size(); ++j)
    if (vars[j].name == name) return static_cast<int>(j);
  return -1;
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Feasible: return "feasible";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::MaxSubset: return "max-subset";
  }
  return "?";
}

Solution solve_feasibility(const LpProblem& p) {
  Solution out;
  Prepared prep = prepare(p, nullptr);
  Tableau t;
  if (t.phase1(prep.nv, prep.rows) == Tableau::Status::Optimal) {
    out.status = SolveStatus::Feasible;
    out.x = t.structural();
    for (size_t j = 0; j < out.x.size(); ++j) out.x[j] += prep.shift[j];
    return out;
  }
  out.status = SolveStatus::Infeasible;
  // Deletion filter for a small irreducible conflict, when cheap.
  if (p.rows.size() <= 64) {
    std::vector<int> keep(p.rows.size());
    std::iota(keep.begin(), keep.end(), 0);
    for (size_t k = 0; k < keep.size();) {
      std::vector<int> trial = keep;
      trial.erase(trial.begin() + static_cast<long>(k));
      if (!feasible_subset(p, trial, nullptr))
        keep = std::move(trial);
      else
        ++k;
    }
    out.conflictRows = keep;
  }
  return out;
}

Solution solve_lp(const LpProblem& p) {
  Solution out;
  Prepared prep = prepare(p, nullptr);
  Tableau t;
  if (t.phase1(prep.nv, prep.rows) != Tableau::Status::Optimal) {
    out.status = SolveStatus::Infeasible;
    return out;
  }
  std::vector<double> c = p.objective;
  c.resize(p.vars.size(), 0.0);
  if (!p.maximize)
    for (auto& v : c) v = -v;
  auto st = t.phase2(c);
  if (st == Tableau::Status::Unbounded) {
    out.status = SolveStatus::Unbounded;
    return out;
  }
  out.status = SolveStatus::Feasible;
  out.x = t.structural();
  for (size_t j = 0; j < out.x.size(); ++j) out.x[j] += prep.shift[j];
  out.objective = 0.0;
  for (size_t j = 0; j < out.x.size(); ++j)
    out.objective += (j < p.objective.size() ? p.objective[j] : 0.0) * out.x[j];
  return out;
}

bool check_solution(const LpProblem& p, const std::vector<double>& x,
                    const std::vector<int>* rowSubset, double relTol) {
  if (x.size() != p.vars.size()) return false;
  for (size_t j = 0; j < p.vars.size(); ++j) {
    double tol = relTol * (1.0 + std::abs(x[j]));
    if (x[j] < p.vars[j].lo - tol) return false;
    if (p.vars[j].hi != kNoBound && x[j] > p.vars[j].hi + tol) return false;
  }
  if (rowSubset) {
    for (int r : *rowSubset)
      if (!row_satisfied(p.rows.at(static_cast<size_t>(r)), x, relTol)) return false;
    return true;
  }
  for (const auto& r : p.rows)
    if (!row_satisfied(r, x, relTol)) return false;
  return true;
}

Solution max_feasible_subset(const LpProblem& p, int nodeBudget) {
  for (const auto& r : p.rows)
    if (r.rel == RowRel::EQ)
      throw std::invalid_argument("max_feasible_subset: EQ rows unsupported");
  for (const auto& v : p.vars)
    if (v.hi == kNoBound)
      throw std::invalid_argument("max_feasible_subset: variable " + v.name +
                                  " needs a finite upper bound");

  const int m = static_cast<int>(p.rows.size());
  Solution out;
  out.status = SolveStatus::MaxSubset;

  {
    Solution full = solve_feasibility(p);
    if (full.status == SolveStatus::Feasible) {
      out.x = full.x;
      out.activeRows.resize(static_cast<size_t>(m));
      std::iota(out.activeRows.begin(), out.activeRows.end(), 0);
      out.objective = m;
      out.note = "all rows feasible";
      return out;
    }
  }

  // Rows normalized to LE sense, with a per-row big-M from the variable box.
  std::vector<LpRow> norm;
  std::vector<double> bigM;
  for (const auto& r : p.rows) {
    LpRow n = r;
    if (n.rel == RowRel::GE) {
      for (auto& [idx, c] : n.terms) c = -c;
      n.rhs = -n.rhs;
      n.rel = RowRel::LE;
    }
    double worst = -n.rhs;
    for (const auto& [idx, c] : n.terms)
      worst += c > 0 ? c * p.vars[static_cast<size_t>(idx)].hi : c * p.vars[static_cast<size_t>(idx)].lo;
    bigM.push_back(std::max(worst, 0.0) + 1.0);
    norm.push_back(std::move(n));
  }

  // Greedy incumbent.
  std::vector<int> best;
  std::vector<double> bestX;
  {
    std::vector<int> cur;
    for (int r = 0; r < m; ++r) {
      cur.push_back(r);
      std::vector<double> x;
      if (feasible_subset(p, cur, &x))
        bestX = std::move(x);
      else
        cur.pop_back();
    }
    best = cur;
  }

  // Branch and bound over row activations; the relaxation lets each free
  // row's indicator run continuously in [0,1] against its big-M row.
  auto nodeLp = [&](const std::vector<int>& forced) {
    LpProblem q;
    q.maximize = true;
    for (const auto& v : p.vars) q.add_var(v.name, v.lo, v.hi);
    q.objective.assign(p.vars.size(), 0.0);
    std::vector<int> yIdx(static_cast<size_t>(m), -1);
    for (int r = 0; r < m; ++r) {
      double lo = forced[static_cast<size_t>(r)] == 1 ? 1.0 : 0.0;
      double hi = forced[static_cast<size_t>(r)] == 0 ? 0.0 : 1.0;
      yIdx[static_cast<size_t>(r)] = q.add_var("y_" + std::to_string(r), lo, hi);
      q.objective.push_back(1.0);
      LpRow row = norm[static_cast<size_t>(r)];
      row.terms.push_back({yIdx[static_cast<size_t>(r)], bigM[static_cast<size_t>(r)]});
      row.rhs += bigM[static_cast<size_t>(r)];
      q.rows.push_back(std::move(row));
    }
    return std::pair<LpProblem, std::vector<int>>(std::move(q), std::move(yIdx));
  };

  struct Node {
    std::vector<int> forced;  // -1 free, 0 off, 1 on
  };
  std::vector<Node> stack;
  stack.push_back({std::vector<int>(static_cast<size_t>(m), -1)});
  int nodes = 0;
  bool exhausted = false;
  while (!stack.empty()) {
    if (++nodes > nodeBudget) {
      exhausted = true;
      break;
    }
    Node node = std::move(stack.back());
    stack.pop_back();
    auto [q, yIdx] = nodeLp(node.forced);
    Solution rel = solve_lp(q);
    if (rel.status != SolveStatus::Feasible) continue;
    int bound = static_cast<int>(std::floor(rel.objective + 1e-6));
    if (bound <= static_cast<int>(best.size())) continue;
    int branchRow = -1;
    double branchDist = 1.0;
    for (int r = 0; r < m; ++r) {
      if (node.forced[static_cast<size_t>(r)] != -1) continue;
      double y = rel.x[static_cast<size_t>(yIdx[static_cast<size_t>(r)])];
      double dist = std::abs(y - std::round(y));
      if (dist > 1e-6 && (branchRow < 0 || dist < branchDist)) {
        branchRow = r;
        branchDist = dist;
      }
    }
    if (branchRow < 0) {
      // Integral: take the active rows and verify them directly.
      std::vector<int> active;
      for (int r = 0; r < m; ++r)
        if (node.forced[static_cast<size_t>(r)] == 1 ||
            rel.x[static_cast<size_t>(yIdx[static_cast<size_t>(r)])] > 0.5)
          active.push_back(r);
      std::vector<double> x;
      if (active.size() > best.size() && feasible_subset(p, active, &x)) {
        best = active;
        bestX = std::move(x);
      }
      continue;
    }
    Node off = node, on = std::move(node);
    on.forced[static_cast<size_t>(branchRow)] = 1;
    off.forced[static_cast<size_t>(branchRow)] = 0;
    stack.push_back(std::move(off));
    stack.push_back(std::move(on));  // explore the activation first
  }

  // The witness point may satisfy more rows than the set it was solved for.
  out.x = bestX;
  out.activeRows.clear();
  for (int r = 0; r < m; ++r)
    if (!bestX.empty() && row_satisfied(p.rows[static_cast<size_t>(r)], bestX, kFeasTol))
      out.activeRows.push_back(r);
  if (out.activeRows.size() < best.size()) out.activeRows = best;
  out.objective = static_cast<double>(out.activeRows.size());
  out.certified = !exhausted;
  if (exhausted) out.note = "node budget exhausted; reporting best subset found";
  return out;
}

std::string write_lp(const LpProblem& p) {
  std::string out = "# lp v1\n";
  out += std::string("sense ") + (p.maximize ? "max" : "min") + "\n";
  for (const auto& v : p.vars) {
    out += "var " + v.name + " " + fmt_num(v.lo) + " " +
           (v.hi == kNoBound ? "inf" : fmt_num(v.hi)) + "\n";
  }
  for (size_t j = 0; j < p.objective.size(); ++j)
    if (p.objective[j] != 0.0)
      out += "obj " + p.vars[j].name + " " + fmt_num(p.objective[j]) + "\n";
  for (const auto& r : p.rows) {
    out += "row " + r.name + " ";
    out += r.rel == RowRel::LE ? "le" : (r.rel == RowRel::GE ? "ge" : "eq");
    out += " " + fmt_num(r.rhs);
    for (const auto& [idx, c] : r.terms)
      out += " " + p.vars[static_cast<size_t>(idx)].name + " " + fmt_num(c);
    out += "\n";
  }
  return out;
}

LpProblem parse_lp(const std::string& text) {
  LpProblem p;
  for (const auto& rawLine : split(text, '\n')) {
    std::string line = trim(rawLine);
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> tok;
    for (const auto& t : split(line, ' '))
      if (!t.empty()) tok.push_back(t);
    if (tok[0] == "sense") {
      p.maximize = tok.at(1) == "max";
    } else if (tok[0] == "var") {
      double hi = tok.at(3) == "inf" ? kNoBound : std::stod(tok.at(3));
      p.add_var(tok.at(1), std::stod(tok.at(2)), hi);
    } else if (tok[0] == "obj") {
      if (p.objective.empty()) p.objective.assign(p.vars.size(), 0.0);
      int idx = p.var_index(tok.at(1));
      if (idx < 0) throw std::invalid_argument("lp parse: unknown variable " + tok.at(1));
      p.objective[static_cast<size_t>(idx)] = std::stod(tok.at(2));
    } else if (tok[0] == "row") {
      LpRow r;
      r.name = tok.at(1);
      r.rel = tok.at(2) == "le" ? RowRel::LE : (tok.at(2) == "ge" ? RowRel::GE : RowRel::EQ);
      r.rhs = std::stod(tok.at(3));
      for (size_t k = 4; k + 1 < tok.size() + 1 && k + 1 <= tok.size(); k += 2) {
        int idx = p.var_index(tok.at(k));
        if (idx < 0) throw std::invalid_argument("lp parse: unknown variable " + tok.at(k));
        r.terms.push_back({idx, std::stod(tok.at(k + 1))});
      }
      p.rows.push_back(std::move(r));
    } else {
      throw std::invalid_argument("lp parse: unknown directive " + tok[0]);
    }
  }
  return p;
}

std::vector<TimerBound> solve_symbolic_range(int responders, const IntervalMatrix& delays) {
  if (responders < 1) throw std::invalid_argument("solve_symbolic_range: need responders >= 1");
  if (delays.systems() < responders + 1)
    throw std::invalid_argument("solve_symbolic_range: delay bounds too small for responder count");
  std::vector<TimerBound> out;
  for (int i = 1; i <= responders; ++i) {
    for (int j = 1; j <= responders; ++j) {
      if (i == j) continue;
      const Interval& qj = delays.at(0, j);
      const Interval& qi = delays.at(0, i);
      const Interval& ji = delays.at(j, i);
      if (!(qj.hi > 0.0) || !(qi.hi > 0.0) || !(ji.hi > 0.0))
        throw std::invalid_argument("solve_symbolic_range: delay bound admits no positive delay");
      TimerBound b;
      b.i = i;
      b.j = j;
      b.bound = qj.lo - qi.hi + ji.lo;
      std::string tail;
      if (b.bound < 0.0)
        tail = " - " + fmt_ms(-b.bound);
      else if (b.bound > 0.0)
        tail = " + " + fmt_ms(b.bound);
      b.rule = "Exp(" + std::to_string(i) + ") < Exp(" + std::to_string(j) + ")" + tail;
      out.push_back(std::move(b));
    }
  }
  return out;
}

std::string uniform_timer_rule(const std::vector<TimerBound>& bounds) {
  if (bounds.empty()) return "";
  for (const auto& b : bounds)
    if (b.bound != bounds[0].bound) return "";
  double v = bounds[0].bound;
  if (v < 0.0) return "Exp_i < Exp_j - " + fmt_ms(-v);
  if (v > 0.0) return "Exp_i < Exp_j + " + fmt_ms(v);
  return "Exp_i < Exp_j";
}

}  // namespace tsmstress
