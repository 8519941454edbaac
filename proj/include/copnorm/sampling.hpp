#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "copnorm/moebius.hpp"

namespace copnorm {

/// Uniform double in [0, 1) from the raw engine; independent of the standard
/// library's distribution implementations so sampled batteries reproduce
/// exactly across platforms.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

enum class DSample { real_negative, real_positive, complex_d };

/// Random valid QdForm with the self-map condition enforced.
///
/// Margins keep every sampled case inside the numerically resolvable region:
/// |d| >= 1.15 and q in [0.22, 0.85] of the self-map bound keep the
/// real-d roots within the slow-series budget, and the rejection loop below
/// keeps the complex-d roots shallow enough that Lambda - 1/q stays above
/// double rounding (the first root of the oscillatory tail sits near
/// ln s = pi / Im(alpha), so tiny Im(alpha) pushes it beyond 1e15 where
/// x_root rounds to 1).
inline QdForm sample_qd(std::mt19937_64& rng, DSample kind) {
  for (;;) {
    double mod = 1.15 + 8.85 * uniform01(rng);
    Complex d;
    switch (kind) {
      case DSample::real_negative: d = Complex(-mod, 0.0); break;
      case DSample::real_positive: d = Complex(mod, 0.0); break;
      case DSample::complex_d: {
        double arg = 0.25 + (3.141592653589793 - 0.27) * uniform01(rng);
        if (uniform01(rng) < 0.5) arg = -arg;
        d = std::polar(mod, arg);
        break;
      }
    }
    double qmax = std::min(1.0, (std::norm(d) - 1.0) / std::norm(1.0 + d));
    double q = (0.22 + 0.63 * uniform01(rng)) * qmax;
    QdForm qd{q, d};
    if (kind == DSample::complex_d) {
      double b = b_param(qd);
      double im_alpha = std::abs(d.imag()) / (q * b * std::norm(1.0 + d));
      if (im_alpha < 0.12) continue;
    }
    return qd;
  }
}

}  // namespace copnorm
