#pragma once

#include <cmath>
#include <complex>

#include "copnorm/error.hpp"
#include "copnorm/moebius.hpp"

namespace copnorm {

namespace detail {

// Lanczos approximation, g = 7, nine terms (Godfrey's coefficient set).
// Relative accuracy is ~1e-14 on the half-plane Re z >= 1/2.
inline constexpr double lanczos_g = 7.0;
inline constexpr double lanczos_coef[9] = {
    0.99999999999980993,   676.5203681218851,     -1259.1392167224028,
    771.32342877765313,    -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,  9.9843695780195716e-6, 1.5056327351493116e-7,
};

inline bool near_nonpositive_integer(Complex z, double tol = 1e-12) {
  if (std::abs(z.imag()) > tol) return false;
  double n = std::round(z.real());
  return n <= 0.0 && std::abs(z.real() - n) <= tol;
}

}  // namespace detail

/// log Gamma on the cut plane; exp of the result is Gamma(z) everywhere the
/// function is defined.  Reflection handles Re z < 1/2.
inline Complex log_gamma(Complex z) {
  if (detail::near_nonpositive_integer(z))
    raise(errc::pole_of_gamma, "gamma pole at a nonpositive integer");
  if (z.real() < 0.5) {
    // Gamma(z) Gamma(1-z) = pi / sin(pi z)
    const double pi = 3.141592653589793238462643383279502884;
    return std::log(pi) - std::log(std::sin(pi * z)) - log_gamma(1.0 - z);
  }
  Complex zm = z - 1.0;
  Complex s = detail::lanczos_coef[0];
  for (int k = 1; k < 9; ++k) s += detail::lanczos_coef[k] / (zm + static_cast<double>(k));
  Complex t = zm + detail::lanczos_g + 0.5;
  const double half_log_two_pi = 0.91893853320467274178032973640562;
  return half_log_two_pi + (zm + 0.5) * std::log(t) - t + std::log(s);
}

inline Complex gamma(Complex z) { return std::exp(log_gamma(z)); }

/// Rising factorial (z)_k = z (z+1) ... (z+k-1), with (z)_0 = 1.
inline Complex pochhammer(Complex z, long long k) {
  if (k < 0) raise(errc::invalid_argument, "pochhammer needs k >= 0");
  Complex p = 1.0;
  for (long long j = 0; j < k; ++j) p *= z + static_cast<double>(j);
  return p;
}

}  // namespace copnorm
