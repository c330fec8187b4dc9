#pragma once

#include <stdexcept>
#include <string>

namespace sppfix {

enum class errc {
  syntax_error,
  negative_coefficient,
  unknown_variable,
  dimension_mismatch,
  empty_system,
  not_clean,
  not_quadratic,
  not_strongly_connected,
  singular_system,
  divergence_suspected,
  exact_size_exceeded,
  no_real_root,
  inexact_sqrt,
  region_violation,
  zero_component,
  non_positive_bound,
  side_condition_unmet,
  probability_mass_mismatch,
  invalid_rule,
  invalid_argument,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::syntax_error: return "SyntaxError";
    case errc::negative_coefficient: return "NegativeCoefficient";
    case errc::unknown_variable: return "UnknownVariable";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::empty_system: return "EmptySystem";
    case errc::not_clean: return "NotClean";
    case errc::not_quadratic: return "NotQuadratic";
    case errc::not_strongly_connected: return "NotStronglyConnected";
    case errc::singular_system: return "SingularSystem";
    case errc::divergence_suspected: return "DivergenceSuspected";
    case errc::exact_size_exceeded: return "ExactSizeExceeded";
    case errc::no_real_root: return "NoRealRoot";
    case errc::inexact_sqrt: return "InexactSqrt";
    case errc::region_violation: return "RegionViolation";
    case errc::zero_component: return "ZeroComponent";
    case errc::non_positive_bound: return "NonPositiveBound";
    case errc::side_condition_unmet: return "SideConditionUnmet";
    case errc::probability_mass_mismatch: return "ProbabilityMassMismatch";
    case errc::invalid_rule: return "InvalidRule";
    case errc::invalid_argument: return "InvalidArgument";
  }
  return "Error";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) { throw Error(code, what); }

}  // namespace sppfix
