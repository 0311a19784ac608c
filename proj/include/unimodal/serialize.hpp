#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "analysis.hpp"
#include "cascade.hpp"
#include "errors.hpp"
#include "interval.hpp"
#include "map.hpp"
#include "telemann.hpp"

namespace unimodal {

// shortest round-trip decimal form; also used for CSV cells
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline void to_json(nlohmann::json& j, const Interval& I) {
  j = nlohmann::json{{"lo", I.lo}, {"hi", I.hi}};
}

inline void to_json(nlohmann::json& j, const CentralCascade& c) {
  j = nlohmann::json{{"u", c.u},
                     {"q", c.q},
                     {"sigma", c.sigma},
                     {"central_return", c.central_return},
                     {"central_ambiguous", c.central_ambiguous},
                     {"nice_verified", c.nice_verified},
                     {"depth_reached", c.depth_reached()},
                     {"termination", to_string(c.termination)}};
}

inline void to_json(nlohmann::json& j, const ReturnBranch& b) {
  j = nlohmann::json{{"interval", b.interval},
                     {"return_time", b.return_time},
                     {"kind", b.kind == BranchKind::Central ? "central" : "monotone"},
                     {"validated", b.validated}};
}

inline void to_json(nlohmann::json& j, const BranchSet& s) {
  j = nlohmann::json{{"u", s.u}, {"branches", s.branches}, {"cap_exceeded", s.cap_exceeded}};
}

inline void to_json(nlohmann::json& j, const TelemannDecomposition& d) {
  j = nlohmann::json{{"k", d.k},     {"n0", d.n0},         {"m", d.m},
                     {"k_list", d.k_list}, {"r", d.r},     {"s_list", d.s_list},
                     {"degenerate", d.degenerate}};
}

inline void to_json(nlohmann::json& j, const InjectivityReport& r) {
  j = nlohmann::json{{"pairs_checked", r.pairs_checked}, {"collisions", r.collisions}};
}

inline void to_json(nlohmann::json& j, const SummabilityReport& r) {
  j = nlohmann::json{{"alpha", r.alpha},
                     {"kmax", r.kmax},
                     {"partial_sums", r.partial_sums},
                     {"tail_ratio", r.tail_ratio},
                     {"verdict", to_string(r.verdict)}};
}

inline void to_json(nlohmann::json& j, const ScalingSummabilityReport& r) {
  j = nlohmann::json{{"alpha", r.alpha},
                     {"per_level_terms", r.per_level_terms},
                     {"sum", r.sum},
                     {"tail_value", r.tail_value},
                     {"tail_extrapolated", r.tail_extrapolated},
                     {"verdict", to_string(r.verdict)}};
}

inline void to_json(nlohmann::json& j, const Prop31Record& r) {
  j = nlohmann::json{{"s", r.s}, {"T", r.T}, {"log_df", r.log_df}};
}

inline void to_json(nlohmann::json& j, const Prop31Audit& a) {
  j = nlohmann::json{{"n", a.n},
                     {"samples", a.samples},
                     {"seed", a.seed},
                     {"rho_n", a.rho_n},
                     {"records", a.records},
                     {"envelope", a.envelope},
                     {"env_counts", a.env_counts},
                     {"lnC", a.lnC},
                     {"ln_inv_theta", a.ln_inv_theta},
                     {"violations", a.violations},
                     {"growth", a.growth}};
}

inline void to_json(nlohmann::json& j, const ManeEstimate& m) {
  j = nlohmann::json{{"u_n0", m.u_n0},
                     {"r_max", m.r_max},
                     {"samples", m.samples},
                     {"seed", m.seed},
                     {"envelope", m.envelope},
                     {"counts", m.counts},
                     {"C_hat", m.C_hat},
                     {"lambda_hat", m.lambda_hat}};
}

inline void to_json(nlohmann::json& j, const DensityEstimate& d) {
  j = nlohmann::json{{"bins", d.bins},
                     {"edges", d.edges},
                     {"masses", d.masses},
                     {"iterates", d.iterates},
                     {"burn_in", d.burn_in}};
}

inline void to_json(nlohmann::json& j, const PeriodicAttractor& p) {
  j = nlohmann::json{{"period", p.period}, {"multiplier", p.multiplier}, {"point", p.point}};
}

inline void to_json(nlohmann::json& j, const ClassLabel& l) {
  j = nlohmann::json{{"class", to_string(l.cls)}};
  if (l.cls == ClassLabel::Class::P) {
    j["period"] = l.period;
    j["multiplier"] = l.multiplier;
  }
  if (l.cls == ClassLabel::Class::R) j["renorm_count"] = l.renorm_count;
}

inline nlohmann::json error_json(const error& e) {
  return nlohmann::json{{"error", e.code()}, {"message", e.what()}};
}

// Map descriptor: {"kind":"quadratic","t":...,"alpha":...} or
// {"kind":"polynomial","alpha":...,"coefficients":[c0,c1,c2,...]} for
// f(x) = sum_k c_k |x|^k with c1 = 0 (critical point at 0).
inline UnimodalMap map_from_json(const nlohmann::json& j) {
  std::string kind = j.at("kind").get<std::string>();
  double alpha = j.value("alpha", 2.0);
  if (kind == "quadratic") return UnimodalMap::quadratic(j.at("t").get<double>(), alpha);
  if (kind == "polynomial") {
    auto coeff = j.at("coefficients").get<std::vector<double>>();
    if (coeff.size() > 1 && coeff[1] != 0.0)
      throw domain_error("polynomial descriptor needs c1 = 0");
    auto poly = [coeff](double x, int d) {  // d-th derivative in |x|, drag the sign back
      double a = std::fabs(x);
      double acc = 0.0;
      for (std::size_t k = coeff.size(); k-- > 0;) {
        double fac = 1.0;
        for (int i = 0; i < d; ++i) fac *= static_cast<double>(k) - i;
        if (fac == 0.0) continue;
        double p = static_cast<double>(k) - d >= 0 ? std::pow(a, static_cast<double>(k) - d) : 0.0;
        acc += coeff[k] * fac * p;
      }
      if (d % 2 == 1) acc *= (x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0));
      return acc;
    };
    return UnimodalMap::custom(
        alpha, [poly](double x) { return poly(x, 0); }, [poly](double x) { return poly(x, 1); },
        [poly](double x) { return poly(x, 2); }, [poly](double x) { return poly(x, 3); });
  }
  throw domain_error("unknown map kind: " + kind);
}

}  // namespace unimodal
