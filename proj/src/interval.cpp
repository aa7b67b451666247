#include "tsmstress/interval.hpp"

namespace tsmstress {

std::set<Rel> interval_cmp_branches(const Interval& a, const Interval& b) {
  std::set<Rel> out;
  if (a.lo < b.hi) out.insert(Rel::LT);
  if (a.intersects(b)) out.insert(Rel::EQ);
  if (a.hi > b.lo) out.insert(Rel::GT);
  return out;
}

Interval backward_offset_interval(const Interval& expQ) {
  return {0.0, expQ.hi};
}

}  // namespace tsmstress
