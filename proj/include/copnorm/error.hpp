#pragma once

#include <stdexcept>
#include <string>

namespace copnorm {

/// Failure categories raised by the library. Every throwing operation
/// documents which of these it can produce.
enum class errc {
  degenerate_map,
  pole_at_input,
  not_self_map,
  not_tangent,
  affine_input,
  not_fixing_one,
  nonreal_derivative,
  self_map_violation,
  pole_in_disk,
  missing_qd_form,
  automorphism_boundary,
  nonreal_d,
  degenerate_r,
  pole_of_gamma,
  parameter_pole,
  no_convergence,
  real_alpha_unsupported,
  search_exhausted,
  complex_d_unsupported,
  no_root,
  unsupported_exact_norm,
  out_of_scope,
  invalid_argument,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::degenerate_map: return "DegenerateMap";
    case errc::pole_at_input: return "PoleAtInput";
    case errc::not_self_map: return "NotSelfMap";
    case errc::not_tangent: return "NotTangent";
    case errc::affine_input: return "AffineInput";
    case errc::not_fixing_one: return "NotFixingOne";
    case errc::nonreal_derivative: return "NonrealDerivative";
    case errc::self_map_violation: return "SelfMapViolation";
    case errc::pole_in_disk: return "PoleInDisk";
    case errc::missing_qd_form: return "MissingQdForm";
    case errc::automorphism_boundary: return "AutomorphismBoundary";
    case errc::nonreal_d: return "NonrealD";
    case errc::degenerate_r: return "DegenerateR";
    case errc::pole_of_gamma: return "PoleOfGamma";
    case errc::parameter_pole: return "ParameterPole";
    case errc::no_convergence: return "NoConvergence";
    case errc::real_alpha_unsupported: return "RealAlphaUnsupported";
    case errc::search_exhausted: return "SearchExhausted";
    case errc::complex_d_unsupported: return "ComplexDUnsupported";
    case errc::no_root: return "NoRoot";
    case errc::unsupported_exact_norm: return "UnsupportedExactNorm";
    case errc::out_of_scope: return "OutOfScope";
    case errc::invalid_argument: return "InvalidArgument";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace copnorm
