#pragma once

// Independent oracles for the test suite. Everything here is deliberately
// written against raw doubles with naive straight-line loops — no library
// headers, no shared helpers — so a bug in the library cannot hide inside
// its own oracle.

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace oracles {

// quadratic family member, alpha = 2 only
inline double quad(double t, double x) { return -2.0 * t * (x * x) + 2.0 * t - 1.0; }
inline double quad_df(double t, double x) { return -4.0 * t * x; }

// first return time of x to (-u, u) by straight iteration; nullopt = no return
inline std::optional<long> first_return(double t, double x, double u, long cap) {
  double y = x;
  for (long j = 1; j <= cap; ++j) {
    y = quad(t, y);
    if (std::fabs(y) < u) return j;
  }
  return std::nullopt;
}

// central-branch boundary by 1e-6 grid scan + bisection: the smallest y > 0
// whose orbit leaves "avoid U_n for q-1 steps then land inside" behavior.
// Returns (u_next, q). Throws if the critical orbit does not return.
struct PsiOracle {
  double u_next;
  long q;
};

inline PsiOracle psi_scan(double t, double u_n, long cap = 100000) {
  auto q_opt = first_return(t, 0.0, u_n, cap);
  if (!q_opt) throw std::runtime_error("psi oracle: critical orbit does not return");
  const long q = *q_opt;
  // inside(y): orbit of y avoids (-u_n, u_n) for steps 1..q-1 and |f^q(y)| < u_n
  auto inside = [&](double y) {
    double z = y;
    for (long j = 1; j < q; ++j) {
      z = quad(t, z);
      if (std::fabs(z) < u_n) return false;
    }
    z = quad(t, z);
    return std::fabs(z) < u_n;
  };
  const double h = 1e-6 * u_n;
  double lo = 0.0;
  bool found = false;
  for (double y = h; y < u_n; y += h) {
    if (inside(y)) {
      lo = y;
    } else if (lo > 0.0) {
      double hi = y;
      for (int it = 0; it < 100; ++it) {
        double m = 0.5 * (lo + hi);
        if (inside(m)) {
          lo = m;
        } else {
          hi = m;
        }
      }
      found = true;
      break;
    }
  }
  if (!found) lo = u_n;  // whole interval inside: boundary degenerates to u_n
  return {lo, q};
}

// dense-grid branch census: return times on a (10x the library default) grid,
// grouped into maximal equal-time runs. No bisection, no validation — counts
// and times only.
struct BranchCensus {
  std::vector<long> times;       // per run
  std::vector<double> run_lo;    // leftmost grid point of the run
  std::vector<double> run_hi;    // rightmost grid point of the run
  bool has_unresolved = false;
};

inline BranchCensus branch_census(double t, double u, long cap, long grid = 40960) {
  BranchCensus c;
  long prev = -2;  // -1 = unresolved
  for (long i = 0; i < grid; ++i) {
    double x = -u + (2.0 * u) * (static_cast<double>(i) + 0.5) / static_cast<double>(grid);
    auto r = first_return(t, x, u, cap);
    long code = r ? *r : -1;
    if (code == -1) c.has_unresolved = true;
    if (code != prev) {
      if (code != -1) {
        c.times.push_back(code);
        c.run_lo.push_back(x);
        c.run_hi.push_back(x);
      }
      prev = code;
    } else if (code != -1) {
      c.run_hi.back() = x;
    }
  }
  return c;
}

// visit-time table by forward scan: times_ge[level] = all j in [1, kmax] with
// |f^j(0)| < u_level, for each supplied boundary.
inline std::vector<std::vector<long>> visit_scan(double t, const std::vector<double>& u,
                                                 long kmax) {
  std::vector<std::vector<long>> table(u.size());
  double y = 0.0;
  for (long j = 1; j <= kmax; ++j) {
    y = quad(t, y);
    for (std::size_t n = 0; n < u.size(); ++n) {
      if (std::fabs(y) < u[n]) table[n].push_back(j);
    }
  }
  return table;
}

// Telemann indices recomputed from the visit table exactly as defined: m =
// deepest visited level index (0-based into u), k_i = last visit to level
// n0+i at or before the previous marker's "no later entry" constraint.
struct TelemannOracle {
  int m = -1;  // -1 = degenerate
  std::vector<long> k_i;  // index i = 0..m (k_0 last)
  long r = 0;
  std::vector<long> s_i;  // per level i = 0..m
};

inline TelemannOracle telemann_scan(double t, const std::vector<double>& u, long k, int n0) {
  auto table = visit_scan(t, u, k);
  TelemannOracle o;
  int deepest = -1;
  for (std::size_t n = n0 - 1; n < u.size(); ++n) {
    if (!table[n].empty()) deepest = static_cast<int>(n);
  }
  if (deepest < n0 - 1) {
    o.r = k;
    return o;
  }
  o.m = deepest - (n0 - 1);
  o.k_i.assign(o.m + 1, 0);
  // deepest marker: last visit to the deepest level
  o.k_i[o.m] = table[deepest].back();
  // k_{i-1} = max{ k_i < j <= k : f^j(0) in U_{n0+i-1} }; since visits to a
  // deeper level are visits to every shallower one, this is just the last
  // visit to the shallower level (>= k_i always holds).
  for (int i = o.m - 1; i >= 0; --i) {
    long last = 0;
    for (long j : table[n0 - 1 + i]) {
      if (j <= k) last = std::max(last, j);
    }
    o.k_i[i] = std::max(last, o.k_i[i + 1]);
  }
  o.r = k - o.k_i[0];
  o.s_i.assign(o.m + 1, 0);
  for (int i = 0; i <= o.m; ++i) {
    long lo_excl = (i == o.m) ? 0 : o.k_i[i + 1];
    long hi_incl = o.k_i[i];
    for (long j : table[n0 - 1 + i]) {
      if (j > lo_excl && j <= hi_incl) ++o.s_i[i];
    }
  }
  return o;
}

// superstable 2^n parameters: bisection on s_n(t) = f_t^{2^n}(0), bracketed
// above the previous superstable parameter; Feigenbaum point by geometric
// extrapolation of the gaps.
inline double superstable_orbit_value(double t, long period) {
  double y = 0.0;
  for (long j = 0; j < period; ++j) y = quad(t, y);
  return y;
}

// s_n has a simple zero at the previous superstable parameter (period 2^{n-1}
// divides 2^n) and its next zero above is t_n. Walk with a step far below the
// expected gap (gaps contract by ~4.669 per level) so the first sign flip
// brackets t_n, then bisect.
inline double superstable_parameter(int n, double prev, double gap_pred) {
  const long period = 1L << n;
  const double step = gap_pred / 64.0;
  double lo = prev + gap_pred * 1e-4;
  double s_lo = superstable_orbit_value(lo, period);
  double hi = lo;
  bool bracketed = false;
  for (int i = 0; i < 4096; ++i) {
    hi = lo + step;
    double s_hi = superstable_orbit_value(hi, period);
    if ((s_lo < 0.0) != (s_hi < 0.0)) {
      bracketed = true;
      break;
    }
    lo = hi;
    s_lo = s_hi;
  }
  if (!bracketed) throw std::runtime_error("superstable oracle: no sign flip");
  for (int it = 0; it < 200; ++it) {
    double m = 0.5 * (lo + hi);
    double s_m = superstable_orbit_value(m, period);
    if ((s_lo < 0.0) == (s_m < 0.0)) {
      lo = m;
      s_lo = s_m;
    } else {
      hi = m;
    }
  }
  return 0.5 * (lo + hi);
}

struct FeigenbaumOracle {
  std::vector<double> t_n;  // superstable parameters, n = 0, 1, ...
  double t_F = 0.0;
  double delta = 0.0;  // gap-ratio estimate
};

inline FeigenbaumOracle feigenbaum(int n_max = 12) {
  FeigenbaumOracle f;
  f.t_n.push_back(0.5);  // f_t(0) = 0 exactly at t = 1/2
  double gap = 0.31;     // seed guess for t_1 - t_0
  for (int n = 1; n <= n_max; ++n) {
    double next = superstable_parameter(n, f.t_n.back(), gap);
    gap = next - f.t_n.back();
    f.t_n.push_back(next);
    gap /= 4.669;  // predicted next gap
  }
  std::size_t n = f.t_n.size();
  f.delta = (f.t_n[n - 2] - f.t_n[n - 3]) / (f.t_n[n - 1] - f.t_n[n - 2]);
  f.t_F = f.t_n[n - 1] + (f.t_n[n - 1] - f.t_n[n - 2]) / (f.delta - 1.0);
  return f;
}

// arcsine bin masses for the t=1 invariant density: mass of [a,b] is
// (asin(b) - asin(a)) / pi.
inline std::vector<double> arcsine_masses(long bins) {
  std::vector<double> m(bins);
  const double pi = 3.14159265358979323846;
  for (long b = 0; b < bins; ++b) {
    double lo = -1.0 + 2.0 * static_cast<double>(b) / static_cast<double>(bins);
    double hi = -1.0 + 2.0 * static_cast<double>(b + 1) / static_cast<double>(bins);
    m[b] = (std::asin(hi) - std::asin(lo)) / pi;
  }
  return m;
}

// ln|Df^k(f(0))| by one straight pass (chain-rule total, no decomposition)
inline double log_deriv_total(double t, long k) {
  double y = quad(t, 0.0);
  double acc = 0.0;
  for (long j = 1; j <= k; ++j) {
    acc += std::log(std::fabs(quad_df(t, y)));
    y = quad(t, y);
  }
  return acc;
}

}  // namespace oracles
