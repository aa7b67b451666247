#include "tsmstress/constraints.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "json.hpp"
#include "tsmstress/text.hpp"

namespace tsmstress {

namespace {

TimeExpr request_rx(int i) { return TimeExpr::origin().add_delay(0, i); }

TimeExpr response_tx(int i) { return TimeExpr::origin().add_delay(0, i).add_timer(i); }

TimeExpr response_rx(int i, int j) {  // j's response arriving at i
  return TimeExpr::origin().add_delay(0, j).add_timer(j).add_delay(j, i);
}

std::string pair_tag(const std::string& base, int i, int j) {
  return base + "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

void declare_expr_vars(const TimeExpr& e, std::map<std::string, VarDecl>& out) {
  for (const auto& [k, c] : e.delayCoeffs) {
    std::string name = "d_" + std::to_string(k.first) + "_" + std::to_string(k.second);
    out.emplace(name, VarDecl{name, 0.0, true, std::nullopt});
  }
  for (const auto& [k, c] : e.timerCoeffs) {
    std::string name = "Exp_" + std::to_string(k);
    out.emplace(name, VarDecl{name, 0.0, true, std::nullopt});
  }
}

void collect_variables(ConstraintSystem& sys) {
  std::map<std::string, VarDecl> vars;
  for (const auto& q : sys.conjuncts) {
    declare_expr_vars(q.lhs, vars);
    declare_expr_vars(q.rhs, vars);
  }
  for (const auto& g : sys.disjunctGroups)
    for (const auto& q : g) {
      declare_expr_vars(q.lhs, vars);
      declare_expr_vars(q.rhs, vars);
    }
  sys.variables.clear();
  for (auto& [name, decl] : vars) sys.variables.push_back(decl);
}

}  // namespace

std::string LinearInequality::str() const {
  return lhs.str() + (rel == IneqRel::StrictLT ? " < " : " <= ") + rhs.str();
}

OrderingFragment ordering_template(const TimeExpr& cond, const TimeExpr& wanted,
                                   const TimeExpr& unwanted) {
  OrderingFragment frag;
  if (cond == wanted) {
    frag.notes.push_back("condition coincides with the wanted event; ordering conjunct dropped");
  } else if ((wanted - cond).provably_positive()) {
    frag.notes.push_back("condition precedes the wanted event structurally; conjunct dropped");
  } else {
    frag.conjuncts.push_back({cond, wanted, IneqRel::StrictLT, "condition_before_wanted", false});
  }

  LinearInequality before{unwanted, cond, IneqRel::StrictLT, "unwanted_before_condition", false};
  LinearInequality after{wanted, unwanted, IneqRel::StrictLT, "wanted_before_unwanted", true};
  auto impossible = [](const LinearInequality& q) {
    return (q.lhs - q.rhs).provably_nonnegative();
  };
  const bool beforeOk = !impossible(before);
  const bool afterOk = !impossible(after);
  if (beforeOk && afterOk) {
    frag.groups.push_back({before, after});
  } else if (beforeOk || afterOk) {
    frag.conjuncts.push_back(beforeOk ? before : after);
    frag.notes.push_back(std::string("member '") +
                         (beforeOk ? after.tag : before.tag) +
                         "' cannot hold; group collapsed to a conjunct");
  } else {
    frag.notes.push_back("no ordering keeps the unwanted transition outside the window");
  }
  return frag;
}

ConstraintSystem worst_overhead_system(int responders) {
  if (responders < 1) throw std::invalid_argument("worst_overhead_system: need responders >= 1");
  ConstraintSystem sys;
  sys.name = "worst_overhead(n=" + std::to_string(responders) + ")";
  for (int i = 1; i <= responders; ++i) {
    for (int j = 1; j <= responders; ++j) {
      if (i == j) continue;
      auto frag = ordering_template(request_rx(i), response_tx(i), response_rx(i, j));
      if (frag.groups.size() != 1)
        throw std::logic_error("worst_overhead_system: unexpected template shape");
      LinearInequality firesFirst = frag.groups[0][1];
      firesFirst.tag = pair_tag("fires_before_arrival", i, j);
      LinearInequality earlyArrival = frag.groups[0][0];
      earlyArrival.tag = pair_tag("arrival_before_request", i, j);
      sys.disjunctGroups.push_back({firesFirst, earlyArrival});
    }
  }
  collect_variables(sys);
  return sys;
}

ConstraintSystem best_overhead_system(int responders, int designated) {
  if (responders < 1) throw std::invalid_argument("best_overhead_system: need responders >= 1");
  if (responders > 1 && (designated < 1 || designated > responders))
    throw std::invalid_argument("best_overhead_system: designated responder out of range");
  ConstraintSystem sys;
  sys.name = "best_overhead(n=" + std::to_string(responders) +
             ",designated=" + std::to_string(designated) + ")";
  for (int i = 1; i <= responders; ++i) {
    if (i == designated) continue;
    auto frag = ordering_template(request_rx(i), response_rx(i, designated), response_tx(i));
    // The template collapses to two conjuncts here: the request precedes the
    // designated response, which precedes i's would-be transmission.
    for (auto q : frag.conjuncts) {
      if (q.tag == "condition_before_wanted") {
        q.tag = pair_tag("request_before_arrival", i, designated);
        q.boundaryHolds = true;  // same-instant request is processed first
      } else {
        q.tag = pair_tag("arrival_before_fire", i, designated);
        q.boundaryHolds = false;  // same-instant timer fire wins
      }
      sys.conjuncts.push_back(q);
    }
    if (!frag.groups.empty())
      throw std::logic_error("best_overhead_system: unexpected template shape");
  }
  collect_variables(sys);
  return sys;
}

ConstraintSystem strictness_margin(const ConstraintSystem& sys, double epsilonMs) {
  if (!(epsilonMs > 0.0)) throw std::invalid_argument("strictness_margin: epsilon must be > 0");
  ConstraintSystem out = sys;
  auto margin = [epsilonMs](LinearInequality& q) {
    if (q.rel == IneqRel::StrictLT) {
      q.rel = IneqRel::LE;
      q.rhs.add_const(-epsilonMs);
    }
  };
  for (auto& q : out.conjuncts) margin(q);
  for (auto& g : out.disjunctGroups) {
    margin(g[0]);
    margin(g[1]);
  }
  for (auto& v : out.variables) {
    if (v.strictLo) {
      v.lo += epsilonMs;
      v.strictLo = false;
    }
  }
  out.notes.push_back("margined by " + fmt_ms(epsilonMs) + " ms");
  return out;
}

std::vector<LinearInequality> ordered_conjuncts(const ConstraintSystem& worstSys,
                                                const std::vector<int>& firingOrder) {
  std::vector<LinearInequality> out;
  // later-firing i against each earlier j: keep fires_before_arrival(i,j)
  for (size_t a = 0; a < firingOrder.size(); ++a) {
    for (size_t b = 0; b < a; ++b) {
      int i = firingOrder[a], j = firingOrder[b];
      std::string tag = pair_tag("fires_before_arrival", i, j);
      for (const auto& g : worstSys.disjunctGroups)
        for (const auto& q : g)
          if (q.tag == tag) out.push_back(q);
    }
  }
  return out;
}

bool satisfies(const LinearInequality& q, const SymbolValues& v, TieSemantics tie) {
  double gap = q.gap().evaluate(v);
  if (q.rel == IneqRel::LE) return gap >= 0.0;
  if (tie == TieSemantics::SimulatorTies && q.boundaryHolds) return gap >= 0.0;
  return gap > 0.0;
}

bool satisfied(const ConstraintSystem& sys, const SymbolValues& v, TieSemantics tie) {
  for (const auto& q : sys.conjuncts)
    if (!satisfies(q, v, tie)) return false;
  for (const auto& g : sys.disjunctGroups)
    if (!satisfies(g[0], v, tie) && !satisfies(g[1], v, tie)) return false;
  return true;
}

LpProblem to_lp(const ConstraintSystem& sys, const std::vector<int>* choice) {
  LpProblem p;
  for (const auto& v : sys.variables) {
    if (v.strictLo)
      throw std::invalid_argument("to_lp: apply strictness_margin first (strict bound on " +
                                  v.name + ")");
    p.add_var(v.name, v.lo, v.hi ? *v.hi : kNoBound);
  }
  auto add_row = [&p](const LinearInequality& q) {
    if (q.rel != IneqRel::LE)
      throw std::invalid_argument("to_lp: apply strictness_margin first (strict row " + q.tag +
                                  ")");
    TimeExpr diff = q.lhs - q.rhs;
    if (diff.t0Coeff != 0)
      throw std::invalid_argument("to_lp: t0 does not cancel in row " + q.tag);
    LpRow row;
    row.name = q.tag;
    for (const auto& [k, c] : diff.delayCoeffs) {
      int idx = p.var_index("d_" + std::to_string(k.first) + "_" + std::to_string(k.second));
      if (idx < 0) throw std::logic_error("to_lp: undeclared delay variable in " + q.tag);
      row.terms.push_back({idx, static_cast<double>(c)});
    }
    for (const auto& [k, c] : diff.timerCoeffs) {
      int idx = p.var_index("Exp_" + std::to_string(k));
      if (idx < 0) throw std::logic_error("to_lp: undeclared timer variable in " + q.tag);
      row.terms.push_back({idx, static_cast<double>(c)});
    }
    row.rel = RowRel::LE;
    row.rhs = -diff.constant;
    p.rows.push_back(std::move(row));
  };
  for (const auto& q : sys.conjuncts) add_row(q);
  for (size_t g = 0; g < sys.disjunctGroups.size(); ++g) {
    int pick = choice ? choice->at(g) : 0;
    if (pick < 0 || pick > 1) throw std::invalid_argument("to_lp: disjunct choice out of range");
    add_row(sys.disjunctGroups[g][static_cast<size_t>(pick)]);
  }
  return p;
}

std::string system_json(const ConstraintSystem& sys) {
  nlohmann::ordered_json doc;
  doc["name"] = sys.name;
  auto ineq = [](const LinearInequality& q) {
    nlohmann::ordered_json j;
    j["tag"] = q.tag;
    j["lhs"] = q.lhs.str();
    j["rel"] = q.rel == IneqRel::StrictLT ? "<" : "<=";
    j["rhs"] = q.rhs.str();
    return j;
  };
  doc["conjuncts"] = nlohmann::ordered_json::array();
  for (const auto& q : sys.conjuncts) doc["conjuncts"].push_back(ineq(q));
  doc["disjunct_groups"] = nlohmann::ordered_json::array();
  for (const auto& g : sys.disjunctGroups) {
    nlohmann::ordered_json gj = nlohmann::ordered_json::array();
    gj.push_back(ineq(g[0]));
    gj.push_back(ineq(g[1]));
    doc["disjunct_groups"].push_back(gj);
  }
  doc["variables"] = nlohmann::ordered_json::array();
  for (const auto& v : sys.variables) {
    nlohmann::ordered_json vj;
    vj["name"] = v.name;
    vj["lo"] = v.lo;
    vj["strict_lo"] = v.strictLo;
    if (v.hi) vj["hi"] = *v.hi;
    doc["variables"].push_back(vj);
  }
  doc["notes"] = sys.notes;
  return doc.dump(2);
}

}  // namespace tsmstress
