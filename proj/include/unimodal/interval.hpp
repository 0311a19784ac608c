#pragma once

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace unimodal {

// Closed real interval inside [-1,1].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  Interval() = default;
  Interval(double a, double b) : lo(a), hi(b) {
    if (!(lo < hi)) throw domain_error("interval requires lo < hi");
    if (lo < -1.0 - 1e-12 || hi > 1.0 + 1e-12) throw domain_error("interval outside [-1,1]");
  }

  double length() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double x) const { return lo < x && x < hi; }
  bool strictly_inside(const Interval& T) const { return T.lo < lo && hi < T.hi; }

  static Interval symmetric(double u) { return Interval(-u, u); }
};

inline bool interiors_disjoint(const Interval& a, const Interval& b, double tol = 1e-12) {
  return a.hi <= b.lo + tol || b.hi <= a.lo + tol;
}

}  // namespace unimodal
