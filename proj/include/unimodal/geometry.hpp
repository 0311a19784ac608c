#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "errors.hpp"
#include "interval.hpp"
#include "map.hpp"

namespace unimodal {

// hyp(I,T) = ln((|L|+|I|)(|R|+|I|) / (|L||R|)) with L, R the components of T\I.
inline double hyp_length(const Interval& I, const Interval& T) {
  double L = I.lo - T.lo;
  double R = T.hi - I.hi;
  if (L <= 0.0 || R <= 0.0)
    throw degenerate_configuration("I must lie strictly inside T (hyp would be infinite)");
  double len = I.length();
  return std::log((L + len) * (R + len) / (L * R));
}

// Classical Koebe bound K(tau) = ((1+tau)/tau)^2; the space tau is measured in
// the image. K decreases to 1 as tau -> infinity.
inline double koebe_bound(double tau) {
  if (!(tau > 0.0)) throw domain_error("koebe_bound needs tau > 0");
  double r = (1.0 + tau) / tau;
  return r * r;
}

namespace detail {

// ln|Df^n| at x plus monotonicity bookkeeping. Throws critical_hit when an
// orbit point used as a derivative factor sits within 1e-14 of 0.
inline double log_abs_dfn(const UnimodalMap& map, int n, double x, int& sign_out) {
  double acc = 0.0;
  int sign = 1;
  double y = x;
  for (int i = 0; i < n; ++i) {
    if (std::fabs(y) < 1e-14) throw critical_hit("orbit point within 1e-14 of the critical point");
    double d = map.deriv(y);
    acc += std::log(std::fabs(d));
    if (d < 0.0) sign = -sign;
    y = map.eval(y);
  }
  sign_out = sign;
  return acc;
}

}  // namespace detail

// Max over grid pairs of |Df^n(x)|/|Df^n(y)| on I, computed in log space.
// Grid sampling can only under-report the true distortion, which keeps
// "measured <= koebe_bound" assertions sound.
inline double measured_distortion(const UnimodalMap& map, int n, const Interval& I, int grid = 64) {
  if (grid < 8) throw domain_error("distortion grid must be >= 8");
  if (n == 0) return 1.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  int sign0 = 0;
  for (int i = 0; i < grid; ++i) {
    double x = I.lo + I.length() * (i + 0.5) / grid;
    int sign = 0;
    double l = detail::log_abs_dfn(map, n, x, sign);
    if (!(std::exp(l) > 1e-300))
      throw not_monotone("|Df^n| below 1e-300 at a grid point");
    if (i == 0)
      sign0 = sign;
    else if (sign != sign0)
      throw not_monotone("Df^n changes sign on the grid");
    lo = std::min(lo, l);
    hi = std::max(hi, l);
  }
  return std::exp(hi - lo);
}

struct ExpansionReport {
  double hyp_before = 0.0;
  double hyp_after = 0.0;
  bool ok = false;
};

// Expansion Lemma check: hyp(f^n(I), f^n(T)) >= hyp(I, T) for monotone f^n|T.
// Images are computed by mapping endpoints.
inline ExpansionReport expansion_check(const UnimodalMap& map, int n, const Interval& I,
                                       const Interval& T) {
  if (!I.strictly_inside(T)) throw degenerate_configuration("I must lie strictly inside T");
  ExpansionReport rep;
  rep.hyp_before = hyp_length(I, T);
  if (n > 0) measured_distortion(map, n, T, 64);  // throws not_monotone if f^n folds on T
  auto image = [&](double x) {
    double y = x;
    for (int i = 0; i < n; ++i) y = map.eval(y);
    return y;
  };
  double a = image(T.lo), b = image(T.hi);
  double c = image(I.lo), d = image(I.hi);
  Interval Ti(std::min(a, b), std::max(a, b));
  Interval Ii(std::min(c, d), std::max(c, d));
  rep.hyp_after = hyp_length(Ii, Ti);
  rep.ok = rep.hyp_after >= rep.hyp_before - 1e-10;
  return rep;
}

}  // namespace unimodal
