#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "interval.hpp"

namespace unimodal {

// Map model: the quadratic family f_t(x) = -2t|x|^alpha + 2t - 1 on [-1,1]
// (alpha = 2 uses the exact polynomial form), or a user-supplied map given by
// evaluation and derivative callables. Immutable after construction.
class UnimodalMap {
 public:
  enum class Kind { quadratic_family, custom };

  using Fn = std::function<double(double)>;

  static UnimodalMap quadratic(double t, double alpha = 2.0) {
    if (!(t >= 0.0 && t <= 1.0)) throw domain_error("t must lie in [0,1]");
    if (!(alpha > 1.0)) throw domain_error("alpha must exceed 1");
    UnimodalMap m;
    m.kind_ = Kind::quadratic_family;
    m.t_ = t;
    m.alpha_ = alpha;
    return m;
  }

  static UnimodalMap custom(double alpha, Fn eval, Fn d1, Fn d2, Fn d3) {
    if (!(alpha > 1.0)) throw domain_error("alpha must exceed 1");
    UnimodalMap m;
    m.kind_ = Kind::custom;
    m.alpha_ = alpha;
    m.eval_ = std::move(eval);
    m.d1_ = std::move(d1);
    m.d2_ = std::move(d2);
    m.d3_ = std::move(d3);
    return m;
  }

  Kind kind() const { return kind_; }
  double t() const { return t_; }
  double alpha() const { return alpha_; }

  double eval(double x) const {
    check_domain(x);
    double y;
    if (kind_ == Kind::quadratic_family) {
      if (alpha_ == 2.0) {
        y = -2.0 * t_ * (x * x) + 2.0 * t_ - 1.0;  // x*x == (-x)*(-x): even exactly
      } else {
        y = -2.0 * t_ * std::pow(std::fabs(x), alpha_) + 2.0 * t_ - 1.0;
      }
    } else {
      y = eval_(x);
    }
    // clamp only roundoff-sized overshoot
    if (y > 1.0) {
      if (y > 1.0 + 1e-12) throw domain_error("map value overshoots [-1,1]");
      y = 1.0;
    } else if (y < -1.0) {
      if (y < -1.0 - 1e-12) throw domain_error("map value overshoots [-1,1]");
      y = -1.0;
    }
    return y;
  }

  double deriv(double x) const {
    check_domain(x);
    if (kind_ == Kind::custom) return d1_(x);
    if (alpha_ == 2.0) return -4.0 * t_ * x;
    if (x == 0.0) return 0.0;
    return -2.0 * t_ * alpha_ * std::pow(std::fabs(x), alpha_ - 1.0) * sign(x);
  }

  double deriv2(double x) const {
    check_domain(x);
    if (kind_ == Kind::custom) return d2_(x);
    if (alpha_ == 2.0) return -4.0 * t_;
    return -2.0 * t_ * alpha_ * (alpha_ - 1.0) * std::pow(std::fabs(x), alpha_ - 2.0);
  }

  double deriv3(double x) const {
    check_domain(x);
    if (kind_ == Kind::custom) return d3_(x);
    if (alpha_ == 2.0) return 0.0;
    return -2.0 * t_ * alpha_ * (alpha_ - 1.0) * (alpha_ - 2.0) *
           std::pow(std::fabs(x), alpha_ - 3.0) * sign(x);
  }

  // Standard Schwarzian D3f/Df - (3/2)(D2f/Df)^2; undefined at the critical point.
  double schwarzian(double x) const {
    check_domain(x);
    if (x == 0.0) throw domain_error("schwarzian undefined at the critical point");
    double d1 = deriv(x);
    if (d1 == 0.0) throw domain_error("schwarzian undefined where Df vanishes");
    double a = deriv2(x) / d1;
    return deriv3(x) / d1 - 1.5 * a * a;
  }

 private:
  static double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }
  static void check_domain(double x) {
    if (std::fabs(x) > 1.0 + 1e-12) throw domain_error("argument outside [-1,1]");
  }

  Kind kind_ = Kind::quadratic_family;
  double t_ = 1.0;
  double alpha_ = 2.0;
  Fn eval_, d1_, d2_, d3_;
};

// Orbit of x0 with log-derivative prefix sums. Products of Df are never formed
// raw: log_deriv_prefix[k] = sum_{j<k} ln|Df(points[j])| and the sign lives in
// sign_prefix[k]. A critical hit (some point exactly 0, so ln|Df| = -inf) marks
// the record instead of poisoning it silently.
struct OrbitRecord {
  std::vector<double> points;
  std::vector<double> log_deriv_prefix;   // valid up to critical_hit (if any)
  std::vector<std::int8_t> sign_prefix;   // sign of Df^k(x0), 0 after a hit
  std::optional<std::size_t> critical_hit;   // index of first point with Df == 0
  std::optional<std::size_t> first_entry;    // first j >= 1 with points[j] in watch
};

inline OrbitRecord orbit(const UnimodalMap& map, double x0, std::size_t k,
                         std::optional<Interval> watch = std::nullopt) {
  OrbitRecord rec;
  rec.points.reserve(k + 1);
  rec.log_deriv_prefix.reserve(k + 1);
  rec.sign_prefix.reserve(k + 1);
  rec.points.push_back(x0);
  rec.log_deriv_prefix.push_back(0.0);
  rec.sign_prefix.push_back(1);
  double x = x0;
  for (std::size_t j = 0; j < k; ++j) {
    double d = map.deriv(x);
    if (d == 0.0 && !rec.critical_hit) rec.critical_hit = j;
    if (rec.critical_hit) {
      rec.log_deriv_prefix.push_back(std::numeric_limits<double>::quiet_NaN());
      rec.sign_prefix.push_back(0);
    } else {
      rec.log_deriv_prefix.push_back(rec.log_deriv_prefix.back() + std::log(std::fabs(d)));
      rec.sign_prefix.push_back(static_cast<std::int8_t>(rec.sign_prefix.back() * (d > 0.0 ? 1 : -1)));
    }
    x = map.eval(x);
    rec.points.push_back(x);
    if (watch && !rec.first_entry && watch->contains(x)) rec.first_entry = j + 1;
  }
  return rec;
}

// Positive fixed point x* in (0,1). Closed form for the alpha = 2 quadratic
// family; bracketing bisection otherwise.
inline double fixed_point_positive(const UnimodalMap& map) {
  if (map.kind() == UnimodalMap::Kind::quadratic_family && map.alpha() == 2.0) {
    if (map.t() <= 0.5) throw no_fixed_point("no fixed point in (0,1) for t <= 1/2");
    return 1.0 - 1.0 / (2.0 * map.t());
  }
  // g(x) = f(x) - x changes sign on (0,1) iff a fixed point exists there.
  const int grid = 1024;
  double prev_x = 1e-9, prev_g = map.eval(prev_x) - prev_x;
  for (int i = 1; i <= grid; ++i) {
    double x = static_cast<double>(i) / grid;
    if (x >= 1.0) x = 1.0 - 1e-12;
    double g = map.eval(x) - x;
    if ((prev_g > 0.0 && g <= 0.0) || (prev_g < 0.0 && g >= 0.0)) {
      double lo = prev_x, hi = x, glo = prev_g;
      for (int it = 0; it < 200; ++it) {
        double m = 0.5 * (lo + hi);
        double gm = map.eval(m) - m;
        if ((glo > 0.0) == (gm > 0.0)) {
          lo = m;
          glo = gm;
        } else {
          hi = m;
        }
        if (hi - lo < 1e-15) break;
      }
      return 0.5 * (lo + hi);
    }
    prev_x = x;
    prev_g = g;
  }
  throw no_fixed_point("no sign change of f(x)-x in (0,1)");
}

}  // namespace unimodal
