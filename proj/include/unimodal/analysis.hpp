#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "cascade.hpp"
#include "errors.hpp"
#include "interval.hpp"
#include "map.hpp"
#include "random.hpp"

namespace unimodal {

enum class Verdict { ConvergentLooking, DivergentLooking, Inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::ConvergentLooking: return "ConvergentLooking";
    case Verdict::DivergentLooking: return "DivergentLooking";
    default: return "Inconclusive";
  }
}

// ---------------------------------------------------------------------------
// summability: S_K = sum_{k<=K} |Df^k(f(0))|^{-1/alpha}, computed in log space
// ---------------------------------------------------------------------------

struct SummabilityReport {
  double alpha = 2.0;
  long kmax = 0;
  std::vector<double> partial_sums;  // S_1 .. S_kmax
  double tail_ratio = 0.0;           // S_kmax / S_{kmax/2} - 1
  Verdict verdict = Verdict::Inconclusive;
};

inline SummabilityReport summability(const UnimodalMap& map, long kmax) {
  if (kmax < 10) throw domain_error("kmax must be >= 10");
  SummabilityReport rep;
  rep.alpha = map.alpha();
  rep.kmax = kmax;
  rep.partial_sums.reserve(kmax);

  std::vector<double> terms(kmax);
  double y = map.eval(0.0);  // f(0); derivative factors start at f^1(0)
  double L = 0.0;            // ln|Df^k(f(0))|
  double S = 0.0;
  for (long k = 1; k <= kmax; ++k) {
    double d = map.deriv(y);
    if (std::fabs(d) <= 1e-300)
      throw critical_hit("critical orbit landed on the critical point");
    L += std::log(std::fabs(d));
    terms[k - 1] = std::exp(-L / rep.alpha);
    S += terms[k - 1];
    rep.partial_sums.push_back(S);
    y = map.eval(y);
  }

  double S_half = rep.partial_sums[kmax / 2 - 1];
  rep.tail_ratio = rep.partial_sums.back() / S_half - 1.0;
  if (rep.tail_ratio < 0.01) {
    rep.verdict = Verdict::ConvergentLooking;
  } else {
    bool nondecreasing = true;
    for (long k = kmax / 2; k + 1 <= kmax; ++k)
      if (terms[k] < terms[k - 1]) {
        nondecreasing = false;
        break;
      }
    rep.verdict = nondecreasing ? Verdict::DivergentLooking : Verdict::Inconclusive;
  }
  return rep;
}

// a = (1/(1-theta^{1/alpha})) * sum_n (C * rho_n)^{-1/alpha}; diagnostic only
inline double a_constant(const std::vector<double>& rhos, double alpha, double C, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw domain_error("theta must lie in (0,1)");
  if (!(C > 0.0)) throw domain_error("C must be positive");
  double s = 0.0;
  for (double r : rhos) s += std::pow(C * r, -1.0 / alpha);
  return s / (1.0 - std::pow(theta, 1.0 / alpha));
}

// ---------------------------------------------------------------------------
// scaling_summability: sum of sigma_n^{1/alpha} over recorded levels, plus a
// geometric tail extrapolation from the trailing term ratios. The tail is an
// extrapolation heuristic, not data; tail_extrapolated flags it.
// ---------------------------------------------------------------------------

struct ScalingSummabilityReport {
  double alpha = 2.0;
  std::vector<double> per_level_terms;
  double sum = 0.0;
  double tail_value = 0.0;
  bool tail_extrapolated = false;
  Verdict verdict = Verdict::Inconclusive;
};

inline ScalingSummabilityReport scaling_summability(const CentralCascade& cascade, double alpha) {
  ScalingSummabilityReport rep;
  rep.alpha = alpha;
  for (double s : cascade.sigma) rep.per_level_terms.push_back(std::pow(s, 1.0 / alpha));
  for (double v : rep.per_level_terms) rep.sum += v;
  if (rep.per_level_terms.size() < 2) return rep;  // no trend to read

  // geometric mean of the last <= 3 consecutive term ratios
  std::size_t nterms = rep.per_level_terms.size();
  std::size_t nratios = std::min<std::size_t>(3, nterms - 1);
  double logr = 0.0;
  for (std::size_t i = nterms - nratios; i < nterms; ++i)
    logr += std::log(rep.per_level_terms[i] / rep.per_level_terms[i - 1]);
  double ratio = std::exp(logr / nratios);

  if (ratio < 0.999) {
    rep.tail_value = rep.per_level_terms.back() * ratio / (1.0 - ratio);
    rep.tail_extrapolated = true;
    rep.sum += rep.tail_value;
  }
  if (ratio <= 0.9)
    rep.verdict = Verdict::ConvergentLooking;
  else if (ratio >= 0.999)
    rep.verdict = Verdict::DivergentLooking;
  else
    rep.verdict = Verdict::Inconclusive;
  return rep;
}

// ---------------------------------------------------------------------------
// least-squares line fit helper: returns {intercept, slope}
// ---------------------------------------------------------------------------

namespace detail {

inline std::pair<double, double> lsq_line(const std::vector<double>& xs,
                                          const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double denom = n * sxx - sx * sx;
  if (std::fabs(denom) < 1e-30) return {sy / n, 0.0};
  double slope = (n * sxy - sx * sy) / denom;
  return {(sy - slope * sx) / n, slope};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// prop31_audit: empirical lower envelope for |Df^T(f(x))| >= C rho_n theta^{-(s-1)}
// over return chains of R_n started in U_{n+1}
// ---------------------------------------------------------------------------

struct Prop31Record {
  int s = 0;       // number of R_n iterates composed
  long T = 0;      // total iterate count: R_n^s(x) = f^T(x)
  double log_df = 0.0;  // ln|Df^T(f(x))|
};

struct Prop31Audit {
  int n = 0;
  long samples = 0;
  std::uint64_t seed = 0;
  double rho_n = 0.0;  // min{1/sigma_{n-1}, 1/sigma_n}
  std::vector<Prop31Record> records;
  std::vector<double> envelope;     // index s-1: min log_df at chain length s
  std::vector<long> env_counts;     // records per s
  double lnC = 0.0;
  double ln_inv_theta = 0.0;
  long violations = 0;  // records below the fitted envelope (0 by construction)
  bool growth = false;  // ln(1/theta) > 0
};

// Each sample draws x in U_{n+1} and walks first returns to U_n, recording a
// (s, T, ln|Df^T|) row after every return up to the first re-entry into
// U_{n+1} (every prefix of the chain satisfies the escape hypothesis) or
// s_max. Derivatives are taken along the orbit of f(x).
inline Prop31Audit prop31_audit(const UnimodalMap& map, const CentralCascade& cascade, int n,
                                long samples, int s_max, std::uint64_t seed = 1) {
  if (n < 2) throw domain_error("level n must be >= 2 (rho_n needs sigma_{n-1})");
  if (static_cast<int>(cascade.depth_reached()) < n + 1)
    throw cascade_too_shallow("audit needs recorded levels n-1, n, n+1");
  if (samples < 100) throw domain_error("samples must be >= 100");
  if (s_max < 2) throw domain_error("s_max must be >= 2");

  const double u_n = cascade.u[n - 1];
  const double u_np1 = cascade.u[n];
  const Interval U_n = Interval::symmetric(u_n);
  const long step_cap = 1000000;

  Prop31Audit audit;
  audit.n = n;
  audit.samples = samples;
  audit.seed = seed;
  audit.rho_n = std::min(1.0 / cascade.sigma[n - 2], 1.0 / cascade.sigma[n - 1]);

  SplitMix64 rng(seed);
  long chains_past_first = 0;
  for (long i = 0; i < samples; ++i) {
    double x = rng.uniform(-u_np1, u_np1);
    if (std::fabs(x) < 1e-15) continue;  // too close to the critical point
    double z = x;
    double logsum = 0.0;
    long T = 0;
    bool dead = false;
    for (int s = 1; s <= s_max && !dead; ++s) {
      // next return of z to U_n
      bool returned = false;
      for (long j = 1; j <= step_cap; ++j) {
        z = map.eval(z);
        double d = std::fabs(map.deriv(z));
        if (d <= 1e-300) {
          dead = true;  // landed on the critical point: abandon this sample
          break;
        }
        logsum += std::log(d);
        ++T;
        if (U_n.contains(z)) {
          returned = true;
          break;
        }
      }
      if (!returned || dead) break;
      audit.records.push_back({s, T, logsum});
      if (s == 2) ++chains_past_first;
      if (std::fabs(z) < u_np1) break;  // entered U_{n+1}: chain ends
    }
  }
  if (chains_past_first < 10)
    throw insufficient_returns("fewer than 10 samples produced a second return");

  audit.envelope.assign(s_max, std::numeric_limits<double>::quiet_NaN());
  audit.env_counts.assign(s_max, 0);
  for (const auto& r : audit.records) {
    double& e = audit.envelope[r.s - 1];
    if (std::isnan(e) || r.log_df < e) e = r.log_df;
    ++audit.env_counts[r.s - 1];
  }

  std::vector<double> xs, ys;
  for (int s = 1; s <= s_max; ++s)
    if (audit.env_counts[s - 1] > 0) {
      xs.push_back(s - 1.0);
      ys.push_back(audit.envelope[s - 1]);
    }
  auto [intercept, slope] = detail::lsq_line(xs, ys);
  // lower the intercept until no record sits below the line
  double shift = 0.0;
  for (const auto& r : audit.records)
    shift = std::min(shift, r.log_df - (intercept + slope * (r.s - 1)));
  intercept += shift;
  audit.ln_inv_theta = slope;
  audit.lnC = intercept - std::log(audit.rho_n);
  audit.growth = slope > 0.0;
  for (const auto& r : audit.records)
    if (r.log_df < intercept + slope * (r.s - 1) - 1e-12) ++audit.violations;
  return audit;
}

// ---------------------------------------------------------------------------
// mane_estimate: lower envelope of ln|Df^r(x)| over orbit segments that avoid
// (-u_n0, u_n0), fitted as lnC_hat + r ln(lambda_hat)
// ---------------------------------------------------------------------------

struct ManeEstimate {
  double u_n0 = 0.0;
  long r_max = 0;
  long samples = 0;
  std::uint64_t seed = 0;
  std::vector<double> envelope;  // index r-1: min ln|Df^r| over qualifying x
  std::vector<long> counts;      // qualifying orbits per r
  double C_hat = 0.0;
  double lambda_hat = 0.0;
};

inline ManeEstimate mane_estimate(const UnimodalMap& map, double u_n0, long r_max, long samples,
                                  std::uint64_t seed = 1) {
  if (!(u_n0 > 0.0 && u_n0 < 1.0)) throw domain_error("u_n0 must lie in (0,1)");
  if (r_max < 10) throw domain_error("r_max must be >= 10");
  if (samples < 10) throw domain_error("samples must be >= 10");

  ManeEstimate est;
  est.u_n0 = u_n0;
  est.r_max = r_max;
  est.samples = samples;
  est.seed = seed;
  est.envelope.assign(r_max, std::numeric_limits<double>::quiet_NaN());
  est.counts.assign(r_max, 0);

  std::vector<std::vector<double>> buckets(r_max);
  SplitMix64 rng(seed);
  for (long i = 0; i < samples; ++i) {
    double z = rng.uniform(-1.0, 1.0);
    double logsum = 0.0;
    for (long r = 1; r <= r_max; ++r) {
      if (std::fabs(z) < u_n0) break;  // hypothesis broken before step r
      logsum += std::log(std::fabs(map.deriv(z)));
      buckets[r - 1].push_back(logsum);
      z = map.eval(z);
    }
  }

  std::vector<double> xs, ys;
  for (long r = 1; r <= r_max; ++r) {
    auto& b = buckets[r - 1];
    est.counts[r - 1] = static_cast<long>(b.size());
    if (!b.empty()) est.envelope[r - 1] = *std::min_element(b.begin(), b.end());
    if (b.size() >= 10) {
      xs.push_back(static_cast<double>(r));
      ys.push_back(est.envelope[r - 1]);
    }
  }
  if (xs.size() < 2)
    throw insufficient_samples("rejection left fewer than two populated r buckets");

  auto [intercept, slope] = detail::lsq_line(xs, ys);
  double shift = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    shift = std::min(shift, ys[i] - (intercept + slope * xs[i]));
  intercept += shift;
  est.C_hat = std::exp(intercept);
  est.lambda_hat = std::exp(slope);
  return est;
}

// ---------------------------------------------------------------------------
// lyapunov: time average of ln|Df| along an orbit
// ---------------------------------------------------------------------------

inline double lyapunov(const UnimodalMap& map, double x0, long iters, long burn_in) {
  if (iters < 10000) throw domain_error("iters must be >= 10^4");
  if (burn_in < 0) throw domain_error("burn_in must be >= 0");
  double z = x0;
  for (long i = 0; i < burn_in; ++i) z = map.eval(z);
  double sum = 0.0;
  for (long i = 0; i < iters; ++i) {
    double d = std::fabs(map.deriv(z));
    if (d <= 1e-300) throw critical_hit("orbit reached the critical point");
    sum += std::log(d);
    z = map.eval(z);
  }
  return sum / static_cast<double>(iters);
}

// ---------------------------------------------------------------------------
// invariant_density: normalized histogram of a long orbit on uniform bins
// ---------------------------------------------------------------------------

struct DensityEstimate {
  long bins = 0;
  std::vector<double> edges;   // bins + 1 edges over [-1, 1]
  std::vector<double> masses;  // normalized to sum 1
  long iterates = 0;
  long burn_in = 0;
};

inline DensityEstimate invariant_density(const UnimodalMap& map, long iters, long bins,
                                         long burn_in, double x0) {
  if (bins < 10) throw domain_error("bins must be >= 10");
  if (iters < 100000) throw domain_error("iters must be >= 10^5");
  DensityEstimate est;
  est.bins = bins;
  est.iterates = iters;
  est.burn_in = burn_in;
  est.edges.resize(bins + 1);
  for (long b = 0; b <= bins; ++b) est.edges[b] = -1.0 + 2.0 * b / bins;

  std::vector<long> counts(bins, 0);
  double z = x0;
  for (long i = 0; i < burn_in; ++i) z = map.eval(z);
  for (long i = 0; i < iters; ++i) {
    long idx = static_cast<long>((z + 1.0) * 0.5 * bins);
    idx = std::clamp<long>(idx, 0, bins - 1);
    ++counts[idx];
    z = map.eval(z);
  }
  est.masses.resize(bins);
  for (long b = 0; b < bins; ++b) est.masses[b] = static_cast<double>(counts[b]) / iters;
  return est;
}

// ---------------------------------------------------------------------------
// detect_periodic_attractor: tail recurrence scan + Newton polish; only
// cycles with |multiplier| < 1 are reported
// ---------------------------------------------------------------------------

struct PeriodicAttractor {
  int period = 0;
  double multiplier = 0.0;
  double point = 0.0;  // a polished cycle point
};

namespace detail {

// multiplier Df^p at x, with the orbit refreshed from x
inline double cycle_multiplier(const UnimodalMap& map, double x, int p) {
  double m = 1.0, z = x;
  for (int i = 0; i < p; ++i) {
    m *= map.deriv(z);
    z = map.eval(z);
  }
  return m;
}

}  // namespace detail

inline std::optional<PeriodicAttractor> detect_periodic_attractor(const UnimodalMap& map,
                                                                  long budget) {
  if (budget < 1000) throw domain_error("budget must be >= 10^3");
  double w = 0.0;
  for (long i = 0; i < budget; ++i) w = map.eval(w);

  for (int p = 1; p <= 64; ++p) {
    double z = w;
    for (int i = 0; i < p; ++i) z = map.eval(z);
    if (std::fabs(z - w) >= 1e-9) continue;

    // Newton polish of g(x) = f^p(x) - x from the tail point
    double x = w;
    bool converged = false;
    for (int it = 0; it < 60; ++it) {
      double fx = x, dfx = 1.0;
      for (int i = 0; i < p; ++i) {
        dfx *= map.deriv(fx);
        fx = map.eval(fx);
      }
      double g = fx - x, dg = dfx - 1.0;
      if (std::fabs(g) <= 1e-12) {
        converged = true;
        break;
      }
      if (std::fabs(dg) < 1e-15) break;
      double step = g / dg;
      double nx = x - step;
      if (!(nx > -1.0 && nx < 1.0)) break;
      x = nx;
    }
    if (!converged) continue;
    double mult = detail::cycle_multiplier(map, x, p);
    if (std::fabs(mult) >= 1.0) continue;  // repelling or neutral: not an attractor
    return PeriodicAttractor{p, mult, x};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// detect_renormalization: nested restrictive intervals J = (-x_hat, x_hat)
// with f^p(J) ⊆ J and pairwise-disjoint forward images
// ---------------------------------------------------------------------------

namespace detail {

using Map1D = std::function<double(double)>;

// one-step image of [a,b] under an even map with its maximum at 0
struct Range {
  double lo, hi;
};

inline Range step_image(const Map1D& g, const Range& r) {
  double va = g(r.lo), vb = g(r.hi);
  Range out{std::min(va, vb), std::max(va, vb)};
  if (r.lo < 0.0 && 0.0 < r.hi) out.hi = std::max(out.hi, g(0.0));
  return out;
}

inline std::optional<double> positive_fixed_point_fn(const Map1D& g, int grid = 2048) {
  double prev_x = 1e-9;
  double prev_v = g(prev_x) - prev_x;
  for (int i = 1; i <= grid; ++i) {
    double x = 1e-9 + (1.0 - 2e-9) * static_cast<double>(i) / grid;
    double v = g(x) - x;
    if (v == 0.0) return x;
    if ((prev_v < 0.0) != (v < 0.0)) {
      double lo = prev_x, hi = x;
      for (int it = 0; it < 200; ++it) {
        double m = 0.5 * (lo + hi);
        if (m == lo || m == hi) break;
        double vm = g(m) - m;
        if ((vm < 0.0) == (prev_v < 0.0))
          lo = m;
        else
          hi = m;
      }
      return 0.5 * (lo + hi);
    }
    prev_x = x;
    prev_v = v;
  }
  return std::nullopt;
}

// 0 = none found; otherwise 1 + recursion on the renormalized map
inline int renorm_scan(const Map1D& g, int p_max, int nest_left, int grid) {
  if (nest_left <= 0) return 0;
  auto u1 = positive_fixed_point_fn(g);
  if (!u1) return 0;

  // sample g^p on a grid over (0, u1) for every p at once
  std::vector<double> xs(grid);
  std::vector<std::vector<double>> pow_vals(p_max + 1, std::vector<double>(grid));
  for (int i = 0; i < grid; ++i) {
    double x = *u1 * (static_cast<double>(i) + 0.5) / grid;
    xs[i] = x;
    double z = x;
    for (int p = 1; p <= p_max; ++p) {
      z = g(z);
      pow_vals[p][i] = z;
    }
  }

  auto iterate_p = [&](double x, int p) {
    double z = x;
    for (int i = 0; i < p; ++i) z = g(z);
    return z;
  };

  for (int p = 2; p <= p_max; ++p) {
    // sign-change candidates of g^p(x) -+ x, both orientations
    struct Cand {
      double xhat;
      bool plus;  // g^p(xhat) = +xhat
    };
    std::vector<Cand> cands;
    for (int sgn = 0; sgn < 2; ++sgn) {
      bool plus = sgn == 0;
      auto h = [&](int i) { return pow_vals[p][i] - (plus ? xs[i] : -xs[i]); };
      for (int i = 0; i + 1 < grid; ++i) {
        double a = h(i), b = h(i + 1);
        if (a == 0.0 || (a < 0.0) == (b < 0.0)) continue;
        double lo = xs[i], hi = xs[i + 1];
        for (int it = 0; it < 120; ++it) {
          double m = 0.5 * (lo + hi);
          if (m == lo || m == hi) break;
          double vm = iterate_p(m, p) - (plus ? m : -m);
          if ((vm < 0.0) == (a < 0.0))
            lo = m;
          else
            hi = m;
        }
        cands.push_back({0.5 * (lo + hi), plus});
      }
    }
    std::sort(cands.begin(), cands.end(),
              [](const Cand& a, const Cand& b) { return a.xhat > b.xhat; });

    for (const Cand& c : cands) {
      double xh = c.xhat;
      if (!(xh > 1e-10 && xh < *u1)) continue;
      bool ok = true;
      std::vector<Range> images;
      Range cur{-xh, xh};
      try {
        for (int i = 0; i < p; ++i) {
          cur = step_image(g, cur);
          images.push_back(cur);
        }
      } catch (const error&) {
        continue;  // image escaped the domain: not invariant
      }
      double tol = xh * (1.0 + 1e-9);
      if (cur.lo < -tol || cur.hi > tol) continue;  // f^p(J) not inside J
      // pairwise interior disjointness of J, f(J), ..., f^{p-1}(J)
      std::vector<Range> all = images;
      all.pop_back();  // f^p(J) coincides with J up to inclusion
      all.push_back({-xh, xh});
      std::sort(all.begin(), all.end(), [](const Range& a, const Range& b) { return a.lo < b.lo; });
      for (std::size_t i = 0; i + 1 < all.size(); ++i)
        if (all[i + 1].lo < all[i].hi - 1e-12) {
          ok = false;
          break;
        }
      if (!ok) continue;

      // renormalize: rescale g^p|J to [-1,1], oriented so the boundary maps to -1
      double scale = xh;
      int pp = p;
      Map1D base = g;
      bool plus = c.plus;
      Map1D H = [base, scale, pp, plus](double y) {
        double z = scale * y;
        for (int i = 0; i < pp; ++i) z = base(z);
        double v = z / scale;
        return plus ? -v : v;
      };
      return 1 + renorm_scan(H, p_max, nest_left - 1, grid);
    }
  }
  return 0;
}

}  // namespace detail

inline int detect_renormalization(const UnimodalMap& map, int p_max, int nest_max,
                                  int grid = 1024) {
  if (p_max < 2) throw domain_error("p_max must be >= 2");
  if (nest_max < 1) throw domain_error("nest_max must be >= 1");
  detail::Map1D g = [&map](double x) { return map.eval(x); };
  return detail::renorm_scan(g, p_max, nest_max, grid);
}

// ---------------------------------------------------------------------------
// classify: P / R / M_candidate / I_unknown / NonRecurrent / Budget
// ---------------------------------------------------------------------------

struct ClassifyBudget {
  long attractor_budget = 20000;
  int p_max = 16;
  int nest_threshold = 3;
  CascadeCaps caps{};
  long kmax = 2000;
  long lyap_iters = 100000;
  long lyap_burn = 1000;
};

struct ClassLabel {
  enum class Class { P, R, I_unknown, M_candidate, NonRecurrent, Budget };
  Class cls = Class::I_unknown;
  int period = 0;         // P only
  double multiplier = 0;  // P only
  int renorm_count = 0;   // R only
};

inline const char* to_string(ClassLabel::Class c) {
  switch (c) {
    case ClassLabel::Class::P: return "P";
    case ClassLabel::Class::R: return "R";
    case ClassLabel::Class::I_unknown: return "I_unknown";
    case ClassLabel::Class::M_candidate: return "M_candidate";
    case ClassLabel::Class::NonRecurrent: return "NonRecurrent";
    default: return "Budget";
  }
}

inline ClassLabel classify(const UnimodalMap& map, const ClassifyBudget& budget = {}) {
  ClassLabel label;

  if (auto att = detect_periodic_attractor(map, budget.attractor_budget)) {
    label.cls = ClassLabel::Class::P;
    label.period = att->period;
    label.multiplier = att->multiplier;
    return label;
  }

  int nests = detect_renormalization(map, budget.p_max, budget.nest_threshold);
  if (nests >= budget.nest_threshold) {
    label.cls = ClassLabel::Class::R;
    label.renorm_count = nests;
    return label;
  }

  CentralCascade cascade;
  try {
    cascade = build_cascade(map, std::nullopt, budget.caps);
  } catch (const error&) {
    label.cls = ClassLabel::Class::Budget;  // no usable u_1 at this budget
    return label;
  }

  Verdict deriv_verdict = Verdict::Inconclusive;
  try {
    deriv_verdict = summability(map, budget.kmax).verdict;
  } catch (const error&) {
    deriv_verdict = Verdict::Inconclusive;
  }

  if (cascade.termination == Termination::NonRecurrent) {
    double lyap = -std::numeric_limits<double>::infinity();
    try {
      lyap = lyapunov(map, 1.0 / 3.0, budget.lyap_iters, budget.lyap_burn);
    } catch (const error&) {
    }
    if (lyap > 0.0 && deriv_verdict == Verdict::ConvergentLooking) {
      label.cls = ClassLabel::Class::M_candidate;  // Misiurewicz-like
    } else {
      label.cls = ClassLabel::Class::NonRecurrent;
    }
    return label;
  }

  if (cascade.depth_reached() < 2) {
    label.cls = ClassLabel::Class::Budget;  // caps bit before any geometry accrued
    return label;
  }

  Verdict scaling_verdict = scaling_summability(cascade, map.alpha()).verdict;
  if (scaling_verdict == Verdict::ConvergentLooking ||
      deriv_verdict == Verdict::ConvergentLooking) {
    label.cls = ClassLabel::Class::M_candidate;
  } else {
    label.cls = ClassLabel::Class::I_unknown;
  }
  return label;
}

}  // namespace unimodal
