#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tsmstress/interval.hpp"
#include "tsmstress/protocol.hpp"

namespace tsmstress {

// One-way delays over the virtual LAN, in milliseconds. Row i holds the
// delays from system i; system 0 is the requester.
class DelayMatrix {
 public:
  DelayMatrix() = default;
  explicit DelayMatrix(int systems, double fill = 0.0);

  int systems() const { return n_; }
  int responders() const { return n_ - 1; }
  double at(int from, int to) const;
  void set(int from, int to, double ms);
  // Zero diagonal, strictly positive elsewhere. Symmetry is not required.
  void validate() const;

  std::string to_csv() const;
  static DelayMatrix from_csv(const std::string& text);
  static DelayMatrix load_csv(const std::string& path);
  void save_csv(const std::string& path) const;

  bool operator==(const DelayMatrix&) const = default;

 private:
  void check(int from, int to) const;
  int n_ = 0;
  std::vector<double> d_;
};

// Mean of the two one-way delays between i and the requester.
double estimated_distance(const DelayMatrix& d, int i, int q = 0);

// Per-pair delay bounds, for tasks where the matrix is given only as ranges.
class IntervalMatrix {
 public:
  IntervalMatrix() = default;
  explicit IntervalMatrix(int systems);
  static IntervalMatrix uniform(int systems, const Interval& range);

  int systems() const { return n_; }
  const Interval& at(int from, int to) const;
  void set(int from, int to, const Interval& v);

 private:
  int n_ = 0;
  std::vector<Interval> d_;
};

enum class TimerStrategy { Fixed, DistanceBased, Deterministic, Adaptive };

const char* to_string(TimerStrategy s);

// Response-timer model plus the requester's retransmission timer. Responder
// timers are drawn from a per-system interval; the interval comes either from
// an explicit list (Fixed) or from the estimated distance to the requester.
struct TimerSpec {
  TimerStrategy strategy = TimerStrategy::DistanceBased;
  std::vector<Interval> fixedIntervals;  // responder i uses fixedIntervals[i-1]
  double c1 = 1.0, c2 = 1.0;             // DistanceBased: [c1*E, (c1+c2)*E]
  double d1 = 1.0, d2 = 0.0;             // Deterministic: d1*E; Adaptive start: [d1*E, (d1+d2)*E]
  Interval requesterTimer{1000.0, 1000.0};

  // Concrete values chosen by synthesis (or by hand); empty until resolved.
  std::vector<double> resolvedExp;
  double resolvedRequester = 0.0;  // 0 = fall back to the interval midpoint

  Interval responder_interval(int system, double estimatedDistance) const;
  Interval responder_interval(int system, const DelayMatrix& d) const;
  double resolved_for(int system, const DelayMatrix& d) const;
  double requester_value() const;
};

struct MessageId {
  int sender = 0;
  StimulusKind kind = StimulusKind::ReqTx;
  int seq = 0;  // per-sender sequence number, so retransmissions stay distinct
  bool operator==(const MessageId&) const = default;
};

struct Drop {
  MessageId msg;
  int receiver = 0;
  bool operator==(const Drop&) const = default;
};

// Selective loss: each entry suppresses one copy of one message at one receiver.
struct LossPattern {
  std::vector<Drop> drops;
  bool dropped(const MessageId& m, int receiver) const;
  bool empty() const { return drops.empty(); }
  void add(const Drop& d);
};

}  // namespace tsmstress
