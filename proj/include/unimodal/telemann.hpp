#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "cascade.hpp"
#include "errors.hpp"
#include "map.hpp"

namespace unimodal {

// Decomposition of the critical orbit up to time k relative to the nest
// U_{n0} ⊃ U_{n0+1} ⊃ …  k_list holds the last-crossing sequence in display
// order k_m ≤ k_{m-1} ≤ … ≤ k_0; s_list is indexed by level offset,
// s_list[i] = s_i = #visits to U_{n0+i} in (k_{i+1}, k_i] with k_{m+1} := 0.
// Entries with k_i = k_{i+1} are zero by construction; they are kept so that
// s_i stays positional. degenerate: the orbit never entered U_{n0} within k
// (then m = -1, r = k, lists empty).
struct TelemannDecomposition {
  long k = 0;
  int n0 = 1;
  int m = -1;
  std::vector<long> k_list;
  long r = 0;
  std::vector<long> s_list;
  bool degenerate = false;
};

// Visit times of the critical orbit per nest level, shared across k.
// times_ge[l] lists (ascending) the j in [1, kmax] with f^j(0) ∈ U_l.
// Built once; decompositions for different k read it concurrently. Visits are
// classified against the recorded nest: a point inside the deepest recorded
// interval gets that level (the cascade's termination field says whether the
// nest was truncated by caps).
struct VisitTable {
  long kmax = 0;
  int depth = 0;  // recorded cascade depth N
  std::vector<std::vector<long>> times_ge;  // index 1..depth (0 unused)
};

inline VisitTable build_visit_table(const UnimodalMap& map, const CentralCascade& cascade,
                                    long kmax) {
  const int N = static_cast<int>(cascade.depth_reached());
  if (N < 1) throw cascade_too_shallow("cascade records no levels");
  VisitTable vt;
  vt.kmax = kmax;
  vt.depth = N;
  vt.times_ge.assign(N + 1, {});
  double y = 0.0;
  for (long j = 1; j <= kmax; ++j) {
    y = map.eval(y);
    double a = std::fabs(y);
    int level = 0;
    while (level < N && a < cascade.u[level]) ++level;  // u[level] = u_{level+1}
    for (int l = 1; l <= level; ++l) vt.times_ge[l].push_back(j);
  }
  return vt;
}

namespace detail {

// largest element <= k, or nullopt
inline std::optional<long> last_leq(const std::vector<long>& v, long k) {
  auto it = std::upper_bound(v.begin(), v.end(), k);
  if (it == v.begin()) return std::nullopt;
  return *(it - 1);
}

inline long count_in(const std::vector<long>& v, long lo_excl, long hi_incl) {
  return std::upper_bound(v.begin(), v.end(), hi_incl) -
         std::upper_bound(v.begin(), v.end(), lo_excl);
}

inline TelemannDecomposition decompose_from_table(const VisitTable& vt, long k, int n0) {
  if (n0 < 1 || n0 > vt.depth) throw cascade_too_shallow("n0 exceeds recorded cascade depth");
  TelemannDecomposition dec;
  dec.k = k;
  dec.n0 = n0;

  int deepest = -1;
  for (int l = n0; l <= vt.depth; ++l)
    if (last_leq(vt.times_ge[l], k)) deepest = l;
  if (deepest < 0) {
    dec.degenerate = true;
    dec.r = k;
    return dec;
  }
  const int m = deepest - n0;
  dec.m = m;

  std::vector<long> ki(m + 1);  // ki[i] = k_i
  ki[m] = *last_leq(vt.times_ge[n0 + m], k);
  for (int i = m - 1; i >= 0; --i) {
    auto later = last_leq(vt.times_ge[n0 + i], k);
    ki[i] = std::max(ki[i + 1], later ? *later : 0);  // k_i >= k_{i+1} always
  }
  dec.r = k - ki[0];
  dec.k_list.reserve(m + 1);
  for (int i = m; i >= 0; --i) dec.k_list.push_back(ki[i]);
  dec.s_list.resize(m + 1);
  for (int i = 0; i <= m; ++i) {
    long prev = (i == m) ? 0 : ki[i + 1];
    dec.s_list[i] = count_in(vt.times_ge[n0 + i], prev, ki[i]);
  }
  return dec;
}

}  // namespace detail

inline TelemannDecomposition decompose(const UnimodalMap& map, const CentralCascade& cascade,
                                        long k, int n0) {
  if (k < 1) throw domain_error("k must be >= 1");
  VisitTable vt = build_visit_table(map, cascade, k);
  return detail::decompose_from_table(vt, k, n0);
}

// |L_total - (L_r + L_{k_m} + sum_i L_{k_i - k_{i+1}})| in log space, every
// factor accumulated in its own pass so the identity is exercised rather than
// restated. Exact mathematics; only reassociation error survives.
inline double chain_rule_residual(const UnimodalMap& map, const TelemannDecomposition& dec) {
  const long k = dec.k;
  std::vector<double> logd(k + 1, 0.0);  // logd[j] = ln|Df(f^j(0))|
  double y = 0.0;
  for (long j = 1; j <= k; ++j) {
    y = map.eval(y);
    if (std::fabs(y) < 1e-14)
      throw critical_hit("orbit point within 1e-14 of the critical point");
    logd[j] = std::log(std::fabs(map.deriv(y)));
  }

  double total = 0.0;
  for (long j = 1; j <= k; ++j) total += logd[j];

  std::vector<long> cuts;  // factor boundaries 0 = b_0 <= b_1 <= ... <= k
  cuts.push_back(0);
  for (long kv : dec.k_list) cuts.push_back(kv);  // k_m, ..., k_0
  cuts.push_back(k);

  double pieces = 0.0;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    double L = 0.0;
    for (long j = cuts[c] + 1; j <= cuts[c + 1]; ++j) L += logd[j];
    pieces += L;
  }
  return std::fabs(total - pieces);
}

struct InjectivityReport {
  long pairs_checked = 0;
  std::vector<std::pair<long, long>> collisions;  // (k, k') with equal (r, s_0..s_m)
};

// Brute-force test of the signature claim: k != k' forces r != r' or some
// s_i != s_i'.
inline InjectivityReport signature_injectivity(const UnimodalMap& map,
                                               const CentralCascade& cascade, long kmax, int n0) {
  if (kmax < 2) return {};
  VisitTable vt = build_visit_table(map, cascade, kmax);
  InjectivityReport rep;
  rep.pairs_checked = kmax * (kmax - 1) / 2;
  std::map<std::vector<long>, long> seen;
  for (long k = 1; k <= kmax; ++k) {
    TelemannDecomposition dec = detail::decompose_from_table(vt, k, n0);
    std::vector<long> key;
    key.push_back(dec.r);
    key.insert(key.end(), dec.s_list.begin(), dec.s_list.end());
    auto [it, fresh] = seen.emplace(std::move(key), k);
    if (!fresh) rep.collisions.emplace_back(it->second, k);
  }
  return rep;
}

}  // namespace unimodal
