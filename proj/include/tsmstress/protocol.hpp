#pragma once

#include <optional>
#include <string>
#include <vector>

namespace tsmstress {

// System 0 is always the requester; 1..n are potential responders.
enum class StateSymbol { R, RT, D, DT };
enum class Role { Requester, Responder };

struct SystemId {
  int index = 0;
  Role role() const { return index == 0 ? Role::Requester : Role::Responder; }
  bool operator==(const SystemId&) const = default;
};

enum class StimulusKind { Loss, ReqTx, ReqRx, ResTx, ResRx, ResTimerFire, ReqTimerFire };

const char* to_string(StateSymbol s);
const char* to_string(StimulusKind k);
std::optional<StateSymbol> state_from_string(const std::string& s);
std::optional<StimulusKind> stimulus_from_string(const std::string& s);
bool is_reception(StimulusKind k);

struct Stimulus {
  StimulusKind kind = StimulusKind::Loss;
  int actor = 0;
  std::optional<int> sender;  // present iff kind is a reception
  bool operator==(const Stimulus&) const = default;
  std::string str() const;
};

struct StateChange {
  StateSymbol from = StateSymbol::R;
  StateSymbol to = StateSymbol::R;
  bool operator==(const StateChange&) const = default;
};

// One table row: a trigger, the state rewrites it performs (possibly several,
// of which at most one applies to a given system), and the stimuli it emits.
struct Transition {
  std::string symbol;
  StimulusKind trigger = StimulusKind::Loss;
  std::vector<StateChange> changes;  // empty for pure-emission rows
  std::vector<StimulusKind> emits;
  bool operator==(const Transition&) const = default;
};

class TransitionTable {
 public:
  TransitionTable() = default;
  explicit TransitionTable(std::vector<Transition> rows);

  const std::vector<Transition>& rows() const { return rows_; }
  const Transition* find(const std::string& symbol) const;
  // The unique row applicable to (trigger, current state), or nullptr.
  const Transition* match(StimulusKind trigger, StateSymbol state) const;
  bool emits_kind(StimulusKind k) const;
  bool triggers_kind(StimulusKind k) const;

  std::string to_json() const;
  static TransitionTable from_json(const std::string& text);
  bool operator==(const TransitionTable& o) const { return rows_ == o.rows_; }

 private:
  void validate() const;
  std::vector<Transition> rows_;
};

// The built-in timer-suppression table: loss, tx_req, rcv_req, res_tmr,
// tx_res, rcv_res, req_tmr.
const TransitionTable& tsm_table();

struct GlobalState {
  std::vector<StateSymbol> perSystem;  // index 0 is the requester
  int systems() const { return static_cast<int>(perSystem.size()); }
  bool operator==(const GlobalState&) const = default;
  std::string str() const;
};

GlobalState initial_global_state(int responders);

struct ApplyOutcome {
  GlobalState state;
  std::vector<Stimulus> emitted;
  const Transition* row = nullptr;  // matched row, if any
  std::optional<StateChange> change;
};

// Applies one stimulus. A stimulus with no matching row is absorbed silently.
// Multicast emissions (receptions) are expanded to one stimulus per other
// system; timing is the caller's concern.
ApplyOutcome apply(const TransitionTable& table, const GlobalState& g, const Stimulus& s);

}  // namespace tsmstress
