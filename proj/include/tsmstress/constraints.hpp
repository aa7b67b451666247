#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "tsmstress/solver.hpp"
#include "tsmstress/time_expr.hpp"

namespace tsmstress {

enum class IneqRel { StrictLT, LE };

// lhs (rel) rhs over delay and timer symbols. t0 always cancels between the
// two sides. boundaryHolds records what happens at exact equality under the
// simulator's tie rules (timer fires before a same-instant delivery, and a
// request is processed before a same-instant response).
struct LinearInequality {
  TimeExpr lhs;
  TimeExpr rhs;
  IneqRel rel = IneqRel::StrictLT;
  std::string tag;
  bool boundaryHolds = false;

  TimeExpr gap() const { return rhs - lhs; }  // required > 0 (or >= 0 once margined)
  std::string str() const;
};

struct VarDecl {
  std::string name;
  double lo = 0.0;
  bool strictLo = true;  // declared as > lo rather than >= lo
  std::optional<double> hi;
};

struct ConstraintSystem {
  std::string name;
  std::vector<LinearInequality> conjuncts;
  // Exactly one member of each group must hold.
  std::vector<std::array<LinearInequality, 2>> disjunctGroups;
  std::vector<VarDecl> variables;
  std::vector<std::string> notes;
};

struct OrderingFragment {
  std::vector<LinearInequality> conjuncts;
  std::vector<std::array<LinearInequality, 2>> groups;
  std::vector<std::string> notes;
};

// Keeps the wanted transition's condition alive until the wanted event, and
// pushes the unwanted transition outside that window: emits cond < wanted as
// a conjunct (dropped when structurally guaranteed) and the two-sided choice
// { unwanted < cond, wanted < unwanted }, pruning members that cannot hold.
OrderingFragment ordering_template(const TimeExpr& cond, const TimeExpr& wanted,
                                   const TimeExpr& unwanted);

// All-responders-fire system: per ordered pair (i,j) either i's timer fires
// before j's response arrives, or j's response lands before i even hears the
// request. Empty for a single responder.
ConstraintSystem worst_overhead_system(int responders);

// Maximum-suppression system for a designated earliest responder: everyone
// else hears the request, then the designated response, then would have fired.
ConstraintSystem best_overhead_system(int responders, int designated);

// Turns every strict inequality into a solver-ready non-strict one with an
// epsilon gap, and tightens strict positivity bounds the same way.
ConstraintSystem strictness_margin(const ConstraintSystem& sys, double epsilonMs);

// Conjunct view of the worst-overhead system given a known firing order
// (earliest first): only later-vs-earlier pairs need the fires-before-arrival
// member; the rest hold by the ordering.
std::vector<LinearInequality> ordered_conjuncts(const ConstraintSystem& worstSys,
                                                const std::vector<int>& firingOrder);

enum class TieSemantics { Strict, SimulatorTies };

bool satisfies(const LinearInequality& q, const SymbolValues& v, TieSemantics tie);
bool satisfied(const ConstraintSystem& sys, const SymbolValues& v, TieSemantics tie);

// LP conversion; requires a margined system (no strict relations left).
// Disjunct groups are resolved to their first member unless `choice` says
// otherwise (one index per group).
LpProblem to_lp(const ConstraintSystem& sys, const std::vector<int>* choice = nullptr);

std::string system_json(const ConstraintSystem& sys);

}  // namespace tsmstress
