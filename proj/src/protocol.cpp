#include "tsmstress/protocol.hpp"

#include <map>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace tsmstress {

const char* to_string(StateSymbol s) {
  switch (s) {
    case StateSymbol::R: return "R";
    case StateSymbol::RT: return "RT";
    case StateSymbol::D: return "D";
    case StateSymbol::DT: return "DT";
  }
  return "?";
}

const char* to_string(StimulusKind k) {
  switch (k) {
    case StimulusKind::Loss: return "Loss";
    case StimulusKind::ReqTx: return "ReqTx";
    case StimulusKind::ReqRx: return "ReqRx";
    case StimulusKind::ResTx: return "ResTx";
    case StimulusKind::ResRx: return "ResRx";
    case StimulusKind::ResTimerFire: return "ResTimerFire";
    case StimulusKind::ReqTimerFire: return "ReqTimerFire";
  }
  return "?";
}

std::optional<StateSymbol> state_from_string(const std::string& s) {
  if (s == "R") return StateSymbol::R;
  if (s == "RT") return StateSymbol::RT;
  if (s == "D") return StateSymbol::D;
  if (s == "DT") return StateSymbol::DT;
  return std::nullopt;
}

std::optional<StimulusKind> stimulus_from_string(const std::string& s) {
  static const std::map<std::string, StimulusKind> m = {
      {"Loss", StimulusKind::Loss},
      {"ReqTx", StimulusKind::ReqTx},
      {"ReqRx", StimulusKind::ReqRx},
      {"ResTx", StimulusKind::ResTx},
      {"ResRx", StimulusKind::ResRx},
      {"ResTimerFire", StimulusKind::ResTimerFire},
      {"ReqTimerFire", StimulusKind::ReqTimerFire},
  };
  auto it = m.find(s);
  if (it == m.end()) return std::nullopt;
  return it->second;
}

bool is_reception(StimulusKind k) {
  return k == StimulusKind::ReqRx || k == StimulusKind::ResRx;
}

std::string Stimulus::str() const {
  std::string out = std::string(to_string(kind)) + "@" + (actor == 0 ? "Q" : std::to_string(actor));
  if (sender) out += " from " + (*sender == 0 ? std::string("Q") : std::to_string(*sender));
  return out;
}

TransitionTable::TransitionTable(std::vector<Transition> rows) : rows_(std::move(rows)) {
  validate();
}

void TransitionTable::validate() const {
  std::set<std::string> symbols;
  for (const auto& r : rows_) {
    if (r.symbol.empty()) throw std::invalid_argument("transition table: empty symbol");
    if (!symbols.insert(r.symbol).second)
      throw std::invalid_argument("transition table: duplicate symbol " + r.symbol);
    std::set<StateSymbol> froms;
    for (const auto& c : r.changes)
      if (!froms.insert(c.from).second)
        throw std::invalid_argument("transition table: row " + r.symbol +
                                    " has two changes from the same state");
  }
  // Determinism: at most one row applies to any (trigger, state).
  for (StateSymbol s : {StateSymbol::R, StateSymbol::RT, StateSymbol::D, StateSymbol::DT}) {
    std::map<StimulusKind, int> hits;
    for (const auto& r : rows_) {
      bool applies = r.changes.empty();
      for (const auto& c : r.changes)
        if (c.from == s) applies = true;
      if (applies) {
        if (++hits[r.trigger] > 1)
          throw std::invalid_argument("transition table: nondeterministic on trigger " +
                                      std::string(to_string(r.trigger)));
      }
    }
  }
}

const Transition* TransitionTable::find(const std::string& symbol) const {
  for (const auto& r : rows_)
    if (r.symbol == symbol) return &r;
  return nullptr;
}

const Transition* TransitionTable::match(StimulusKind trigger, StateSymbol state) const {
  for (const auto& r : rows_) {
    if (r.trigger != trigger) continue;
    if (r.changes.empty()) return &r;
    for (const auto& c : r.changes)
      if (c.from == state) return &r;
  }
  return nullptr;
}

bool TransitionTable::emits_kind(StimulusKind k) const {
  for (const auto& r : rows_)
    for (auto e : r.emits)
      if (e == k) return true;
  return false;
}

bool TransitionTable::triggers_kind(StimulusKind k) const {
  for (const auto& r : rows_)
    if (r.trigger == k) return true;
  return false;
}

std::string TransitionTable::to_json() const {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : rows_) {
    nlohmann::ordered_json row;
    row["symbol"] = r.symbol;
    row["trigger"] = to_string(r.trigger);
    auto start = nlohmann::ordered_json::array();
    auto end = nlohmann::ordered_json::array();
    for (const auto& c : r.changes) {
      start.push_back(to_string(c.from));
      end.push_back(to_string(c.to));
    }
    row["start"] = start;
    row["end"] = end;
    auto emits = nlohmann::ordered_json::array();
    for (auto e : r.emits) emits.push_back(to_string(e));
    row["emits"] = emits;
    rows.push_back(row);
  }
  nlohmann::ordered_json doc;
  doc["rows"] = rows;
  return doc.dump(2);
}

TransitionTable TransitionTable::from_json(const std::string& text) {
  auto doc = nlohmann::json::parse(text);
  std::vector<Transition> rows;
  for (const auto& row : doc.at("rows")) {
    Transition t;
    t.symbol = row.at("symbol").get<std::string>();
    auto trig = stimulus_from_string(row.at("trigger").get<std::string>());
    if (!trig) throw std::invalid_argument("transition table: unknown trigger");
    t.trigger = *trig;
    const auto& start = row.at("start");
    const auto& end = row.at("end");
    if (start.size() != end.size())
      throw std::invalid_argument("transition table: start/end length mismatch");
    for (size_t i = 0; i < start.size(); ++i) {
      auto f = state_from_string(start[i].get<std::string>());
      auto to = state_from_string(end[i].get<std::string>());
      if (!f || !to) throw std::invalid_argument("transition table: unknown state symbol");
      t.changes.push_back({*f, *to});
    }
    for (const auto& e : row.at("emits")) {
      auto k = stimulus_from_string(e.get<std::string>());
      if (!k) throw std::invalid_argument("transition table: unknown emission");
      t.emits.push_back(*k);
    }
    rows.push_back(std::move(t));
  }
  return TransitionTable(std::move(rows));
}

const TransitionTable& tsm_table() {
  static const TransitionTable table({
      {"loss", StimulusKind::Loss, {{StateSymbol::R, StateSymbol::RT}}, {StimulusKind::ReqTx}},
      {"tx_req", StimulusKind::ReqTx, {}, {StimulusKind::ReqRx}},
      {"rcv_req", StimulusKind::ReqRx, {{StateSymbol::D, StateSymbol::DT}}, {}},
      {"res_tmr", StimulusKind::ResTimerFire, {{StateSymbol::DT, StateSymbol::D}}, {StimulusKind::ResTx}},
      {"tx_res", StimulusKind::ResTx, {}, {StimulusKind::ResRx}},
      {"rcv_res", StimulusKind::ResRx,
       {{StateSymbol::RT, StateSymbol::R}, {StateSymbol::DT, StateSymbol::D}}, {}},
      {"req_tmr", StimulusKind::ReqTimerFire, {}, {StimulusKind::ReqTx}},
  });
  return table;
}

std::string GlobalState::str() const {
  std::string out;
  for (size_t i = 0; i < perSystem.size(); ++i) {
    if (i) out += ",";
    out += to_string(perSystem[i]);
  }
  return out;
}

GlobalState initial_global_state(int responders) {
  if (responders < 1) throw std::invalid_argument("initial_global_state: need at least one responder");
  GlobalState g;
  g.perSystem.assign(static_cast<size_t>(responders) + 1, StateSymbol::D);
  g.perSystem[0] = StateSymbol::R;
  return g;
}

ApplyOutcome apply(const TransitionTable& table, const GlobalState& g, const Stimulus& s) {
  if (s.actor < 0 || s.actor >= g.systems())
    throw std::invalid_argument("apply: unknown system " + std::to_string(s.actor));
  ApplyOutcome out{g, {}, nullptr, std::nullopt};
  const StateSymbol cur = g.perSystem[static_cast<size_t>(s.actor)];
  const Transition* row = table.match(s.kind, cur);
  if (!row) return out;  // inert in this state
  out.row = row;
  for (const auto& c : row->changes) {
    if (c.from == cur) {
      out.state.perSystem[static_cast<size_t>(s.actor)] = c.to;
      out.change = c;
      break;
    }
  }
  for (StimulusKind k : row->emits) {
    if (is_reception(k)) {
      for (int r = 0; r < g.systems(); ++r)
        if (r != s.actor) out.emitted.push_back({k, r, s.actor});
    } else {
      out.emitted.push_back({k, s.actor, std::nullopt});
    }
  }
  return out;
}

}  // namespace tsmstress
