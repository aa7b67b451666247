#include "tsmstress/time_expr.hpp"

#include <stdexcept>

#include "tsmstress/text.hpp"

namespace tsmstress {

double SymbolValues::delay(int from, int to) const {
  if (!delays) throw std::invalid_argument("symbol values: no delay matrix bound");
  return delays->at(from, to);
}

double SymbolValues::timer(int system) const {
  if (system < 0 || system >= static_cast<int>(timers.size()))
    throw std::invalid_argument("symbol values: no timer value for system " +
                                std::to_string(system));
  return timers[static_cast<size_t>(system)];
}

TimeExpr TimeExpr::origin() {
  TimeExpr e;
  e.t0Coeff = 1;
  return e;
}

TimeExpr& TimeExpr::add_delay(int from, int to, int coeff) {
  delayCoeffs[{from, to}] += coeff;
  prune();
  return *this;
}

TimeExpr& TimeExpr::add_timer(int system, int coeff) {
  timerCoeffs[system] += coeff;
  prune();
  return *this;
}

TimeExpr& TimeExpr::add_const(double ms) {
  constant += ms;
  return *this;
}

void TimeExpr::prune() {
  for (auto it = delayCoeffs.begin(); it != delayCoeffs.end();)
    it = it->second == 0 ? delayCoeffs.erase(it) : std::next(it);
  for (auto it = timerCoeffs.begin(); it != timerCoeffs.end();)
    it = it->second == 0 ? timerCoeffs.erase(it) : std::next(it);
}

TimeExpr TimeExpr::operator+(const TimeExpr& o) const {
  TimeExpr r = *this;
  r.constant += o.constant;
  r.t0Coeff += o.t0Coeff;
  for (const auto& [k, c] : o.delayCoeffs) r.delayCoeffs[k] += c;
  for (const auto& [k, c] : o.timerCoeffs) r.timerCoeffs[k] += c;
  r.prune();
  return r;
}

TimeExpr TimeExpr::operator-(const TimeExpr& o) const {
  TimeExpr r = *this;
  r.constant -= o.constant;
  r.t0Coeff -= o.t0Coeff;
  for (const auto& [k, c] : o.delayCoeffs) r.delayCoeffs[k] -= c;
  for (const auto& [k, c] : o.timerCoeffs) r.timerCoeffs[k] -= c;
  r.prune();
  return r;
}

bool TimeExpr::operator==(const TimeExpr& o) const {
  return constant == o.constant && t0Coeff == o.t0Coeff && delayCoeffs == o.delayCoeffs &&
         timerCoeffs == o.timerCoeffs;
}

bool TimeExpr::is_zero() const {
  return constant == 0.0 && t0Coeff == 0 && delayCoeffs.empty() && timerCoeffs.empty();
}

bool TimeExpr::provably_nonnegative() const {
  if (t0Coeff != 0 || constant < 0.0) return false;
  for (const auto& [k, c] : delayCoeffs)
    if (c < 0) return false;
  for (const auto& [k, c] : timerCoeffs)
    if (c < 0) return false;
  return true;
}

bool TimeExpr::provably_positive() const {
  if (!provably_nonnegative()) return false;
  return constant > 0.0 || !delayCoeffs.empty() || !timerCoeffs.empty();
}

double TimeExpr::evaluate(const SymbolValues& v) const {
  double out = constant + t0Coeff * v.t0;
  for (const auto& [k, c] : delayCoeffs) out += c * v.delay(k.first, k.second);
  for (const auto& [k, c] : timerCoeffs) out += c * v.timer(k);
  return out;
}

std::string TimeExpr::str() const {
  struct Term {
    double coeff;
    std::string sym;  // empty for the constant
  };
  std::vector<Term> terms;
  if (t0Coeff != 0) terms.push_back({static_cast<double>(t0Coeff), "t0"});
  for (const auto& [k, c] : delayCoeffs)
    terms.push_back({static_cast<double>(c),
                     "d(" + std::to_string(k.first) + "," + std::to_string(k.second) + ")"});
  for (const auto& [k, c] : timerCoeffs)
    terms.push_back({static_cast<double>(c), "Exp(" + std::to_string(k) + ")"});
  if (constant != 0.0) terms.push_back({constant, ""});
  if (terms.empty()) return "0";

  std::string out;
  bool first = true;
  for (const auto& t : terms) {
    double mag = t.coeff < 0 ? -t.coeff : t.coeff;
    std::string body;
    if (t.sym.empty())
      body = fmt_ms(mag);
    else if (mag == 1.0)
      body = t.sym;
    else
      body = fmt_ms(mag) + "*" + t.sym;
    if (first) {
      out = (t.coeff < 0 ? "-" : "") + body;
      first = false;
    } else {
      out += (t.coeff < 0 ? " - " : " + ") + body;
    }
  }
  return out;
}

}  // namespace tsmstress
