#pragma once

#include <set>
#include <stdexcept>

namespace tsmstress {

// Closed interval of milliseconds. A scalar is lo == hi.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  Interval() = default;
  Interval(double l, double h) : lo(l), hi(h) {
    if (!(lo <= hi)) throw std::invalid_argument("interval: lo > hi");
  }
  static Interval scalar(double v) { return {v, v}; }

  double mid() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
  bool is_scalar() const { return lo == hi; }
  bool contains(double v) const { return lo <= v && v <= hi; }
  bool intersects(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }

  Interval operator+(const Interval& o) const { return {lo + o.lo, hi + o.hi}; }
  Interval operator-(const Interval& o) const { return {lo - o.hi, hi - o.lo}; }
  Interval operator*(double k) const {
    return k >= 0 ? Interval{lo * k, hi * k} : Interval{hi * k, lo * k};
  }
  bool operator==(const Interval& o) const = default;
};

enum class Rel { LT, EQ, GT };

// Branch relations that remain possible when comparing two interval-valued
// quantities. GT requires overlap past the boundary (a single shared endpoint
// gives EQ, not GT); LT is symmetric; EQ holds when the intervals intersect.
std::set<Rel> interval_cmp_branches(const Interval& a, const Interval& b);

// Residual timer interval seen by a backward search whose starting offset x
// into the timer's life is arbitrary: Exp - x spans [0, Exp.hi].
Interval backward_offset_interval(const Interval& expQ);

}  // namespace tsmstress
