#pragma once

#include <limits>
#include <string>
#include <vector>

#include "tsmstress/topology.hpp"

namespace tsmstress {

inline constexpr double kNoBound = std::numeric_limits<double>::infinity();

struct VarSpec {
  std::string name;
  double lo = 0.0;
  double hi = kNoBound;
};

enum class RowRel { LE, GE, EQ };

struct LpRow {
  std::string name;
  std::vector<std::pair<int, double>> terms;  // (variable index, coefficient)
  RowRel rel = RowRel::LE;
  double rhs = 0.0;
};

struct LpProblem {
  std::vector<VarSpec> vars;
  std::vector<double> objective;  // empty means all zeros
  bool maximize = true;
  std::vector<LpRow> rows;

  int add_var(const std::string& name, double lo = 0.0, double hi = kNoBound);
  int var_index(const std::string& name) const;  // -1 if absent
};

enum class SolveStatus { Feasible, Infeasible, Unbounded, MaxSubset };

const char* to_string(SolveStatus s);

struct Solution {
  SolveStatus status = SolveStatus::Infeasible;
  std::vector<double> x;
  double objective = 0.0;
  std::vector<int> activeRows;   // MaxSubset: rows the assignment satisfies
  std::vector<int> conflictRows; // Infeasible: a small conflicting row set, when cheap
  bool certified = true;         // MaxSubset: false when the node budget ran out
  std::string note;
};

// Two-phase primal simplex with Bland's rule; returns a basic feasible point.
Solution solve_feasibility(const LpProblem& p);
// Same machinery with the objective row active; may report Unbounded.
Solution solve_lp(const LpProblem& p);

// Largest-cardinality satisfiable row subset, by branch and bound over binary
// row activations with a per-row big-M relaxation. Every variable needs a
// finite upper bound. EQ rows are not supported here.
Solution max_feasible_subset(const LpProblem& p, int nodeBudget = 200000);

// Row-by-row verification, independent of the solver's own bookkeeping.
bool check_solution(const LpProblem& p, const std::vector<double>& x,
                    const std::vector<int>* rowSubset = nullptr, double relTol = 1e-7);

std::string write_lp(const LpProblem& p);
LpProblem parse_lp(const std::string& text);

// Pairwise timer bound implied by delay ranges: for each ordered responder
// pair (i,j), the amount Exp(i) must stay below Exp(j) so that i's response
// fires before j's can arrive, whatever the delays turn out to be. The bound
// is the minimum of d(Q,j) - d(Q,i) + d(j,i) over the given ranges.
struct TimerBound {
  int i = 0;
  int j = 0;
  double bound = 0.0;  // Exp(i) < Exp(j) + bound
  std::string rule;    // e.g. "Exp(1) < Exp(2) - 196"
};

std::vector<TimerBound> solve_symbolic_range(int responders, const IntervalMatrix& delays);
// Generic one-line form when every pairwise bound coincides, e.g.
// "Exp_i < Exp_j - 196"; empty when the bounds differ across pairs.
std::string uniform_timer_rule(const std::vector<TimerBound>& bounds);

}  // namespace tsmstress
