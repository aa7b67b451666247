#include "tsmstress/topology.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "tsmstress/text.hpp"

namespace tsmstress {

DelayMatrix::DelayMatrix(int systems, double fill) : n_(systems) {
  if (systems < 1) throw std::invalid_argument("delay matrix: need at least one system");
  d_.assign(static_cast<size_t>(n_) * n_, fill);
  for (int i = 0; i < n_; ++i) d_[static_cast<size_t>(i) * n_ + i] = 0.0;
}

void DelayMatrix::check(int from, int to) const {
  if (from < 0 || from >= n_ || to < 0 || to >= n_)
    throw std::out_of_range("delay matrix: system index out of range");
}

double DelayMatrix::at(int from, int to) const {
  check(from, to);
  return d_[static_cast<size_t>(from) * n_ + to];
}

void DelayMatrix::set(int from, int to, double ms) {
  check(from, to);
  d_[static_cast<size_t>(from) * n_ + to] = ms;
}

void DelayMatrix::validate() const {
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      double v = at(i, j);
      if (i == j && v != 0.0)
        throw std::invalid_argument("delay matrix: nonzero diagonal at " + std::to_string(i));
      if (i != j && !(v > 0.0))
        throw std::invalid_argument("delay matrix: non-positive delay d(" + std::to_string(i) +
                                    "," + std::to_string(j) + ")");
    }
  }
}

std::string DelayMatrix::to_csv() const {
  std::string out;
  for (int j = 0; j < n_; ++j) {
    if (j) out += ",";
    out += std::to_string(j);
  }
  out += "\n";
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      if (j) out += ",";
      out += fmt_num(at(i, j));
    }
    out += "\n";
  }
  return out;
}

DelayMatrix DelayMatrix::from_csv(const std::string& text) {
  std::vector<std::string> lines;
  for (auto& l : split(text, '\n'))
    if (!trim(l).empty()) lines.push_back(trim(l));
  if (lines.size() < 2) throw std::invalid_argument("delay matrix csv: too few rows");
  auto header = split(lines[0], ',');
  int n = static_cast<int>(header.size());
  for (int j = 0; j < n; ++j)
    if (trim(header[static_cast<size_t>(j)]) != std::to_string(j))
      throw std::invalid_argument("delay matrix csv: header must list system ids 0..n-1");
  if (static_cast<int>(lines.size()) != n + 1)
    throw std::invalid_argument("delay matrix csv: expected " + std::to_string(n) + " data rows");
  DelayMatrix m(n);
  for (int i = 0; i < n; ++i) {
    auto cells = split(lines[static_cast<size_t>(i) + 1], ',');
    if (static_cast<int>(cells.size()) != n)
      throw std::invalid_argument("delay matrix csv: row width mismatch");
    for (int j = 0; j < n; ++j) m.set(i, j, std::stod(trim(cells[static_cast<size_t>(j)])));
  }
  m.validate();
  return m;
}

DelayMatrix DelayMatrix::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_csv(ss.str());
}

void DelayMatrix::save_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << to_csv();
}

double estimated_distance(const DelayMatrix& d, int i, int q) {
  if (i == q) throw std::invalid_argument("estimated_distance: i == q");
  return 0.5 * (d.at(i, q) + d.at(q, i));
}

IntervalMatrix::IntervalMatrix(int systems) : n_(systems) {
  if (systems < 1) throw std::invalid_argument("interval matrix: need at least one system");
  d_.assign(static_cast<size_t>(n_) * n_, Interval{});
}

IntervalMatrix IntervalMatrix::uniform(int systems, const Interval& range) {
  IntervalMatrix m(systems);
  for (int i = 0; i < systems; ++i)
    for (int j = 0; j < systems; ++j)
      if (i != j) m.set(i, j, range);
  return m;
}

const Interval& IntervalMatrix::at(int from, int to) const {
  if (from < 0 || from >= n_ || to < 0 || to >= n_)
    throw std::out_of_range("interval matrix: system index out of range");
  return d_[static_cast<size_t>(from) * n_ + to];
}

void IntervalMatrix::set(int from, int to, const Interval& v) {
  if (from < 0 || from >= n_ || to < 0 || to >= n_)
    throw std::out_of_range("interval matrix: system index out of range");
  d_[static_cast<size_t>(from) * n_ + to] = v;
}

const char* to_string(TimerStrategy s) {
  switch (s) {
    case TimerStrategy::Fixed: return "fixed";
    case TimerStrategy::DistanceBased: return "distance";
    case TimerStrategy::Deterministic: return "deterministic";
    case TimerStrategy::Adaptive: return "adaptive";
  }
  return "?";
}

Interval TimerSpec::responder_interval(int system, double estimatedDistance) const {
  if (system < 1) throw std::invalid_argument("timer spec: responder index must be >= 1");
  switch (strategy) {
    case TimerStrategy::Fixed: {
      size_t idx = static_cast<size_t>(system) - 1;
      if (idx >= fixedIntervals.size())
        throw std::invalid_argument("timer spec: no fixed interval for responder " +
                                    std::to_string(system));
      return fixedIntervals[idx];
    }
    case TimerStrategy::DistanceBased:
      return {c1 * estimatedDistance, (c1 + c2) * estimatedDistance};
    case TimerStrategy::Deterministic:
      return Interval::scalar(d1 * estimatedDistance);
    case TimerStrategy::Adaptive:
      return {d1 * estimatedDistance, (d1 + d2) * estimatedDistance};
  }
  throw std::logic_error("timer spec: unknown strategy");
}

Interval TimerSpec::responder_interval(int system, const DelayMatrix& d) const {
  double e = strategy == TimerStrategy::Fixed ? 0.0 : estimated_distance(d, system);
  return responder_interval(system, e);
}

double TimerSpec::resolved_for(int system, const DelayMatrix& d) const {
  size_t idx = static_cast<size_t>(system) - 1;
  if (idx < resolvedExp.size()) return resolvedExp[idx];
  // Unresolved: deterministic point for distance strategies, midpoint for fixed.
  if (strategy == TimerStrategy::Fixed) return responder_interval(system, d).mid();
  double e = estimated_distance(d, system);
  if (strategy == TimerStrategy::DistanceBased) return c1 * e;
  return d1 * e;
}

double TimerSpec::requester_value() const {
  return resolvedRequester > 0.0 ? resolvedRequester : requesterTimer.mid();
}

bool LossPattern::dropped(const MessageId& m, int receiver) const {
  for (const auto& d : drops)
    if (d.receiver == receiver && d.msg == m) return true;
  return false;
}

void LossPattern::add(const Drop& d) {
  if (!dropped(d.msg, d.receiver)) drops.push_back(d);
}

}  // namespace tsmstress
