#pragma once

#include <stdexcept>
#include <string>

namespace unimodal {

// Error taxonomy. Two exit classes for the CLI: domain errors (bad inputs,
// impossible requests) and numerical failures (caps hit, certification broke).
enum class error_class { domain, numerical };

class error : public std::runtime_error {
 public:
  error(std::string code, error_class cls, const std::string& msg)
      : std::runtime_error(msg), code_(std::move(code)), cls_(cls) {}
  const std::string& code() const noexcept { return code_; }
  error_class cls() const noexcept { return cls_; }

 private:
  std::string code_;
  error_class cls_;
};

struct domain_error : error {
  explicit domain_error(const std::string& msg) : error("DomainError", error_class::domain, msg) {}
};
struct no_fixed_point : error {
  explicit no_fixed_point(const std::string& msg) : error("NoFixedPoint", error_class::domain, msg) {}
};
struct degenerate_configuration : error {
  explicit degenerate_configuration(const std::string& msg)
      : error("DegenerateConfiguration", error_class::domain, msg) {}
};
struct not_monotone : error {
  explicit not_monotone(const std::string& msg) : error("NotMonotone", error_class::numerical, msg) {}
};
struct critical_hit : error {
  explicit critical_hit(const std::string& msg) : error("CriticalHit", error_class::numerical, msg) {}
};
struct non_recurrent : error {
  non_recurrent(const std::string& msg, bool provable)
      : error("NonRecurrent", error_class::numerical, msg), provable(provable) {}
  bool provable;  // true: orbit trapped on an exact fixed point outside U
};
struct bisection_failure : error {
  explicit bisection_failure(const std::string& msg)
      : error("BisectionFailure", error_class::numerical, msg) {}
};
struct not_nice_point : error {
  explicit not_nice_point(const std::string& msg) : error("NotNicePoint", error_class::domain, msg) {}
};
struct cascade_too_shallow : error {
  explicit cascade_too_shallow(const std::string& msg)
      : error("CascadeTooShallow", error_class::numerical, msg) {}
};
struct insufficient_returns : error {
  explicit insufficient_returns(const std::string& msg)
      : error("InsufficientReturns", error_class::numerical, msg) {}
};
struct insufficient_samples : error {
  explicit insufficient_samples(const std::string& msg)
      : error("InsufficientSamples", error_class::numerical, msg) {}
};

}  // namespace unimodal
