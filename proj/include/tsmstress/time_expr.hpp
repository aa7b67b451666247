#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tsmstress/topology.hpp"

namespace tsmstress {

// Concrete values for the symbols a TimeExpr can mention. Timer index 0 is
// the requester's retransmission timer; index i is responder i's expiration.
struct SymbolValues {
  double t0 = 0.0;
  const DelayMatrix* delays = nullptr;
  std::vector<double> timers;

  double delay(int from, int to) const;
  double timer(int system) const;
};

// Linear combination of the request origin t0, one-way delays d(i,j) and
// timer durations Exp(i), plus a constant offset in milliseconds.
struct TimeExpr {
  double constant = 0.0;
  int t0Coeff = 0;
  std::map<std::pair<int, int>, int> delayCoeffs;
  std::map<int, int> timerCoeffs;

  static TimeExpr origin();  // t0
  static TimeExpr zero() { return {}; }

  TimeExpr& add_delay(int from, int to, int coeff = 1);
  TimeExpr& add_timer(int system, int coeff = 1);
  TimeExpr& add_const(double ms);

  TimeExpr operator+(const TimeExpr& o) const;
  TimeExpr operator-(const TimeExpr& o) const;
  bool operator==(const TimeExpr& o) const;

  bool is_zero() const;
  // True when every symbol in this expression must make it > 0 (resp. >= 0)
  // given that all delays and timers are strictly positive.
  bool provably_positive() const;
  bool provably_nonnegative() const;

  double evaluate(const SymbolValues& v) const;
  std::string str() const;  // e.g. "t0 + d(0,2) + Exp(2)"

 private:
  void prune();
};

}  // namespace tsmstress
