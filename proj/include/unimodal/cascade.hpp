#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"
#include "interval.hpp"
#include "map.hpp"

namespace unimodal {

struct CascadeCaps {
  int depth = 12;
  double u_floor = 1e-12;
  long return_cap = 1000000;
  int grid = 4096;
  int nice_check = 1000;
};

enum class Termination { DepthReached, NonRecurrent, UnderflowCap, ReturnTimeCap };

inline const char* to_string(Termination t) {
  switch (t) {
    case Termination::DepthReached: return "DepthReached";
    case Termination::NonRecurrent: return "NonRecurrent";
    case Termination::UnderflowCap: return "UnderflowCap";
    default: return "ReturnTimeCap";
  }
}

// Central-interval cascade u_n = psi(u_{n-1}). u holds the boundary points
// (u[0] = u_1), q the central return times, sigma the scaling factors
// u_{n+1}/u_n, central_return the flags R_n(0) in U_{n+1}.
struct CentralCascade {
  std::vector<double> u;
  std::vector<long> q;
  std::vector<double> sigma;
  std::vector<bool> central_return;
  std::vector<bool> central_ambiguous;  // |f^q(0)| within 1e-12 of u_{n+1}
  std::vector<bool> nice_verified;      // per recorded u_n
  Termination termination = Termination::DepthReached;

  std::size_t depth_reached() const { return u.size(); }
};

// Smallest j in [1, cap] with f^j(x) in U, or nullopt. Landing on an exact
// fixed point outside U proves the orbit never returns; *provable_trap reports
// that distinction (t = 1 drives 0 -> 1 -> -1 with -1 exactly fixed in
// binary64, which is what makes the NonRecurrent verdict sound there).
inline std::optional<long> first_return_time(const UnimodalMap& map, double x, const Interval& U,
                                             long cap, double* landing = nullptr,
                                             bool* provable_trap = nullptr) {
  if (provable_trap) *provable_trap = false;
  double y = x;
  for (long j = 1; j <= cap; ++j) {
    double next = map.eval(y);
    if (U.contains(next)) {
      if (landing) *landing = next;
      return j;
    }
    if (next == y) {
      if (provable_trap) *provable_trap = true;
      return std::nullopt;
    }
    y = next;
  }
  return std::nullopt;
}

// Nice-point certification: the orbit of u must avoid U = (-u, u). Exact
// cascade boundary orbits are eventually fixed (they land on earlier
// boundaries and finally on the repelling fixed point), so a raw forward check
// false-fails once 1-ulp errors amplify. The check locks instead: success when
// the orbit reaches a near-fixed point y (|f(y)-y| <= 1e-9) outside U, or
// comes within 1e-9 of a previously certified boundary with u_m >= u.
inline bool nice_point_check(const UnimodalMap& map, double u, int steps,
                             const std::vector<double>& certified = {}) {
  const double lock_tol = 1e-9;
  double y = u;
  for (int i = 0; i < steps; ++i) {
    double next = map.eval(y);
    if (std::fabs(y) >= u * (1.0 - 1e-12)) {
      if (std::fabs(next - y) <= lock_tol) return true;
      for (double um : certified)
        if (um > u * (1.0 + 1e-12) && std::fabs(std::fabs(y) - um) <= lock_tol) return true;
    }
    if (i > 0 && std::fabs(y) < u * (1.0 - 1e-12)) return false;
    y = next;
  }
  return true;
}

struct PsiStep {
  double u_next = 0.0;
  long q = 0;
  bool central = false;
  bool ambiguous = false;
  double f_q0 = 0.0;  // f^q(0), the central return point
};

// One cascade step: q = first return time of 0 to U_n; u_next = boundary of
// the central branch V, located by doubling from 1e-12 and bisection on the
// predicate "orbit of y avoids U_n before step q and |f^q(y)| < u_n" (the
// branch boundary is the first of the two exit events). Validates the
// defining equation |f^q(u_next)| = u_n to 1e-10.
inline PsiStep psi_step(const UnimodalMap& map, double u_n, const CascadeCaps& caps) {
  Interval U = Interval::symmetric(u_n);
  double landing = 0.0;
  bool trap = false;
  auto q_opt = first_return_time(map, 0.0, U, caps.return_cap, &landing, &trap);
  if (!q_opt)
    throw non_recurrent(trap ? "critical orbit trapped on a fixed point outside U_n"
                             : "critical orbit did not return within the return-time cap",
                        trap);
  const long q = *q_opt;

  // inside(y): y still belongs to the central branch closure approach from 0.
  auto inside = [&](double y) {
    double z = y;
    for (long i = 1; i <= q; ++i) {
      z = map.eval(z);
      if (i < q && U.contains(z)) return false;  // intermediate entry: past the boundary
    }
    return std::fabs(z) < u_n;
  };

  double lo = 1e-12;
  if (!inside(lo)) {
    // central branch thinner than the seed: bisect downward from the seed
    double hi2 = lo, lo2 = 0.0;
    for (int it = 0; it < 200; ++it) {
      double m = 0.5 * (lo2 + hi2);
      if (m == lo2 || m == hi2) break;
      if (inside(m))
        lo2 = m;
      else
        hi2 = m;
    }
    if (lo2 == 0.0) throw bisection_failure("central branch boundary below floating resolution");
    lo = lo2;
  } else {
    double y = lo;
    while (y < u_n) {
      double cand = std::min(y * 2.0, u_n * (1.0 - 1e-16));
      if (cand <= y) break;
      if (!inside(cand)) break;
      y = cand;
      lo = y;
      if (cand >= u_n * (1.0 - 1e-16)) break;
    }
  }
  double hi = std::min(lo * 2.0, u_n);
  if (inside(hi) && hi >= u_n) hi = u_n;  // boundary bracketed against u_n itself
  for (int it = 0; it < 200; ++it) {
    double m = 0.5 * (lo + hi);
    if (m == lo || m == hi) break;
    if (inside(m))
      lo = m;
    else
      hi = m;
    if ((hi - lo) <= 1e-13 * lo) break;
  }

  PsiStep step;
  step.u_next = lo;  // lo is Inside: the computed orbit avoidance holds by construction
  step.q = q;
  step.f_q0 = landing;

  // validation: |f^q(u_next)| = u_n within 1e-10 and the pre-return orbit of
  // u_next stays out of U_n (the defining property of the central branch edge)
  double z = step.u_next;
  for (long i = 1; i <= q; ++i) {
    z = map.eval(z);
    if (i < q && U.contains(z))
      throw bisection_failure("bracketing invariant broke: intermediate orbit entered U_n");
  }
  if (std::fabs(std::fabs(z) - u_n) > 1e-10)
    throw bisection_failure("central branch boundary failed |f^q(u_next)| = u_n within 1e-10");

  double gap = std::fabs(step.f_q0) - step.u_next;
  step.ambiguous = std::fabs(gap) <= 1e-12;
  step.central = step.ambiguous ? true : (std::fabs(step.f_q0) < step.u_next);
  return step;
}

// Build the cascade from u_1 (default: the positive fixed point, the canonical
// nice point: its orbit is fixed, hence never enters (-u_1, u_1)).
inline CentralCascade build_cascade(const UnimodalMap& map, std::optional<double> u1_opt,
                                    const CascadeCaps& caps) {
  double u1 = u1_opt ? *u1_opt : fixed_point_positive(map);
  if (!(u1 > 0.0 && u1 < 1.0)) throw domain_error("u_1 must lie in (0,1)");
  if (!nice_point_check(map, u1, caps.nice_check))
    throw not_nice_point("u_1 fails the nice-point check");

  CentralCascade c;
  c.u.push_back(u1);
  c.nice_verified.push_back(true);
  for (int level = 1; level < caps.depth; ++level) {
    PsiStep step;
    try {
      step = psi_step(map, c.u.back(), caps);
    } catch (const non_recurrent& e) {
      c.termination = (e.provable || level == 1) ? Termination::NonRecurrent
                                                 : Termination::ReturnTimeCap;
      return c;
    } catch (const bisection_failure&) {
      // the next boundary cannot be certified at 1e-10 in binary64: the
      // cascade has reached its resolution floor
      c.termination = Termination::UnderflowCap;
      return c;
    }
    if (step.u_next < caps.u_floor) {
      c.termination = Termination::UnderflowCap;
      return c;
    }
    c.q.push_back(step.q);
    c.sigma.push_back(step.u_next / c.u.back());
    c.central_return.push_back(step.central);
    c.central_ambiguous.push_back(step.ambiguous);
    c.u.push_back(step.u_next);
    c.nice_verified.push_back(nice_point_check(map, step.u_next, caps.nice_check, c.u));
  }
  c.termination = Termination::DepthReached;
  return c;
}

enum class BranchKind { Monotone, Central };

struct ReturnBranch {
  Interval interval{-0.5, 0.5};
  long return_time = 0;
  BranchKind kind = BranchKind::Monotone;
  bool validated = false;  // branch invariant (onto U_n, no interior fold) held within tolerance
};

struct BranchSet {
  double u = 0.0;
  std::vector<ReturnBranch> branches;
  bool cap_exceeded = false;  // grid points with unresolved return times remain
};

namespace detail {

inline double iterate_n(const UnimodalMap& map, double x, long n) {
  double y = x;
  for (long i = 0; i < n; ++i) y = map.eval(y);
  return y;
}

// Monotone on [a,b] under f^n: sign constancy of Df^n on a coarse probe grid.
inline bool monotone_on(const UnimodalMap& map, long n, double a, double b) {
  if (n == 0) return true;
  int sign0 = 0;
  for (int i = 0; i <= 8; ++i) {
    double x = a + (b - a) * i / 8.0;
    double y = x;
    int sign = 1;
    for (long s = 0; s < n; ++s) {
      double d = map.deriv(y);
      if (std::fabs(d) < 1e-300) return false;
      if (d < 0.0) sign = -sign;
      y = map.eval(y);
    }
    if (i == 0)
      sign0 = sign;
    else if (sign != sign0)
      return false;
  }
  return true;
}

}  // namespace detail

// Enumerate return branches of U = (-u, u) with return time <= caps.return_cap
// ... capped at `time_cap`: grid scan, group equal-time runs, bisect run
// boundaries. Enumeration is explicitly partial: branches thinner than the
// grid pitch are missed and unresolved cells set cap_exceeded.
inline BranchSet return_branches(const UnimodalMap& map, double u, long time_cap,
                                 const CascadeCaps& caps) {
  BranchSet out;
  out.u = u;
  Interval U = Interval::symmetric(u);
  const int grid = caps.grid;

  auto rt = [&](double x) -> std::optional<long> { return first_return_time(map, x, U, time_cap); };

  std::vector<double> xs(grid);
  std::vector<std::optional<long>> times(grid);
  for (int i = 0; i < grid; ++i) {
    xs[i] = -u + 2.0 * u * (i + 0.5) / grid;
    times[i] = rt(xs[i]);
    if (!times[i]) out.cap_exceeded = true;
  }

  // refine the boundary between x (time tau) and y (different outcome)
  auto refine = [&](double x, double y, long tau) {
    double lo = x, hi = y;
    for (int it = 0; it < 80; ++it) {
      double m = 0.5 * (lo + hi);
      if (m == lo || m == hi) break;
      if (rt(m) == std::optional<long>(tau))
        lo = m;
      else
        hi = m;
    }
    return lo;
  };

  int i = 0;
  while (i < grid) {
    if (!times[i]) {
      ++i;
      continue;
    }
    long tau = *times[i];
    int j = i;
    while (j + 1 < grid && times[j + 1] == times[i]) ++j;
    double blo = (i == 0) ? std::nextafter(-u, 1.0) : refine(xs[i], xs[i - 1], tau);
    double bhi = (j == grid - 1) ? std::nextafter(u, -1.0) : refine(xs[j], xs[j + 1], tau);
    ReturnBranch b;
    b.interval = Interval(std::min(blo, bhi), std::max(blo, bhi));
    b.return_time = tau;
    b.kind = (b.interval.lo < 0.0 && 0.0 < b.interval.hi) ? BranchKind::Central
                                                          : BranchKind::Monotone;
    // endpoint images must land on the boundary of U_n (onto validation)
    auto img = [&](double x0) {
      double z = x0;
      for (long s = 0; s < tau; ++s) z = map.eval(z);
      return z;
    };
    double a = img(b.interval.lo), bnd = img(b.interval.hi);
    if (b.kind == BranchKind::Monotone) {
      // onto: endpoints at opposite boundary points; the sign probe rejects
      // odd unions of sub-grid branches that fake opposite endpoint images
      b.validated = std::fabs(std::fabs(a) - u) <= 1e-9 && std::fabs(std::fabs(bnd) - u) <= 1e-9 &&
                    ((a < 0.0) != (bnd < 0.0)) &&
                    detail::monotone_on(map, tau, b.interval.lo, b.interval.hi);
    } else {
      b.validated = std::fabs(std::fabs(a) - u) <= 1e-10 && std::fabs(std::fabs(bnd) - u) <= 1e-10 &&
                    ((a < 0.0) == (bnd < 0.0));  // folding: both endpoints at the same side
    }
    out.branches.push_back(b);
    i = j + 1;
  }
  return out;
}

struct BranchExtension {
  Interval domain{-0.5, 0.5};  // J in the f(I) coordinate space
  Interval base{-0.5, 0.5};    // A = f(I)
  double tau_left = 0.0;       // realized Koebe space, measured in the image
  double tau_right = 0.0;
  bool reaches_target = false;
};

// Branch extension: extend A = f(I) to J so that f^{tau-1}|J is monotone
// with image covering `target` (U_{n-1}; pass the maximal-extension mode with
// target = nullopt for level 1). Returns the realized image-space Koebe space
// on each side of f^{tau-1}(A).
inline BranchExtension branch_extension(const UnimodalMap& map, const ReturnBranch& branch,
                                        std::optional<Interval> target) {
  const long n = branch.return_time - 1;
  double fa = map.eval(branch.interval.lo);
  double fb = map.eval(branch.interval.hi);
  if (branch.kind == BranchKind::Central) fb = map.eval(0.0);  // fold: f(I) = [f(boundary), f(0)]
  BranchExtension ext;
  ext.base = Interval(std::min(fa, fb), std::max(fa, fb));
  if (!detail::monotone_on(map, n, ext.base.lo, ext.base.hi))
    throw not_monotone("f^{tau-1} is not monotone on f(I): not a return branch");

  auto img = [&](double x) { return detail::iterate_n(map, x, n); };
  double ia = img(ext.base.lo), ib = img(ext.base.hi);
  double img_lo = std::min(ia, ib), img_hi = std::max(ia, ib);
  bool increasing = ia < ib;

  // grow one side of the domain: return the domain endpoint whose image hits
  // `goal` (target boundary), or the monotonicity edge in maximal mode
  auto grow = [&](bool left, std::optional<double> goal) {
    double from = left ? ext.base.lo : ext.base.hi;
    double step = std::max(ext.base.length(), 1e-12);
    double good = from;
    for (int it = 0; it < 200; ++it) {
      double cand = left ? std::max(from - step, -1.0) : std::min(from + step, 1.0);
      if (cand == good) break;
      bool mono = left ? detail::monotone_on(map, n, cand, ext.base.hi)
                       : detail::monotone_on(map, n, ext.base.lo, cand);
      bool crossed = false;
      if (mono && goal) {
        double v = img(cand);
        crossed = left == increasing ? v <= *goal : v >= *goal;
      }
      if (!mono || crossed) {
        // bisect between good and cand on the same predicate
        double lo = good, hi = cand;
        for (int b = 0; b < 100; ++b) {
          double m = 0.5 * (lo + hi);
          if (m == lo || m == hi) break;
          bool okm = left ? detail::monotone_on(map, n, m, ext.base.hi)
                          : detail::monotone_on(map, n, ext.base.lo, m);
          bool crm = false;
          if (okm && goal) {
            double v = img(m);
            crm = left == increasing ? v <= *goal : v >= *goal;
          }
          if (okm && !crm)
            lo = m;
          else
            hi = m;
        }
        return goal ? hi : lo;  // include the crossing; stay inside the monotone region
      }
      good = cand;
      if ((left && cand <= -1.0) || (!left && cand >= 1.0)) break;
      step *= 2.0;
    }
    return good;
  };

  std::optional<double> goal_left, goal_right;
  if (target) {
    goal_left = increasing ? target->lo : target->hi;
    goal_right = increasing ? target->hi : target->lo;
  }
  double jlo = grow(true, goal_left);
  double jhi = grow(false, goal_right);
  if (!(jlo < ext.base.lo)) jlo = std::nextafter(ext.base.lo, -1.0);
  if (!(jhi > ext.base.hi)) jhi = std::nextafter(ext.base.hi, 1.0);
  ext.domain = Interval(jlo, jhi);

  double ja = img(jlo), jb = img(jhi);
  double jimg_lo = std::min(ja, jb), jimg_hi = std::max(ja, jb);
  double base_len = img_hi - img_lo;
  ext.tau_left = (img_lo - jimg_lo) / base_len;
  ext.tau_right = (jimg_hi - img_hi) / base_len;
  if (target)
    ext.reaches_target = jimg_lo <= target->lo + 1e-9 && jimg_hi >= target->hi - 1e-9;
  return ext;
}

}  // namespace unimodal
