#pragma once

#include <cmath>
#include <complex>

#include "copnorm/error.hpp"
#include "copnorm/gamma.hpp"
#include "copnorm/moebius.hpp"

namespace copnorm {

/// Series evaluation budgets.  The slow cap serves the Euler/Pfaff branch at
/// arguments approaching 1, where the term ratio can reach ~0.9999.
inline constexpr double default_series_tol = 1e-14;
inline constexpr int default_max_terms = 100000;
inline constexpr int default_max_terms_slow = 500000;

/// Crossover between the Pfaff route and the Barnes connection formula for
/// G(t) = 2F1(alpha, conj(alpha); delta; t) at t < 0.  Below -50 the Barnes
/// inner series run at argument |1/t| < 0.02 and converge in a few terms.
inline constexpr double barnes_crossover = 50.0;

enum class SeriesMethod { direct_series, pfaff_mapped, barnes_large_arg };

struct SeriesEvaluation {
  Complex value{0.0};
  long long terms_used{0};
  bool converged{false};
  SeriesMethod method{SeriesMethod::direct_series};
};

/// Hypergeometric parameters of the norm equation,
///   alpha = (1+d)/(q b |1+d|^2),  beta = (d + d conj(d))/(q b |1+d|^2),
///   delta = 1/(q b),
/// satisfying delta - beta = conj(alpha) and delta - alpha = conj(beta).
struct HypergeometricParams {
  Complex alpha;
  Complex beta;
  double delta;
};

inline bool alpha_is_real(const HypergeometricParams& p) {
  return std::abs(p.alpha.imag()) < 1e-12 * (1.0 + std::abs(p.alpha));
}

namespace detail {

struct KahanC {
  Complex sum{0.0}, comp{0.0};
  void add(Complex term) {
    Complex y = term - comp;
    Complex t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

struct KahanR {
  double sum{0.0}, comp{0.0};
  void add(double term) {
    double y = term - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

}  // namespace detail

/// Direct power series for 2F1(a, b; c; z).  Valid for |z| < 1, and for any z
/// when the series terminates (a or b a nonpositive integer).  The partial sum
/// is returned even when the term cap is hit; `converged` records the outcome.
inline SeriesEvaluation f21_series(Complex a, Complex b, Complex c, Complex z,
                                   double tol = default_series_tol,
                                   int max_terms = default_max_terms) {
  if (detail::near_nonpositive_integer(c))
    raise(errc::parameter_pole, "2F1 with c a nonpositive integer");
  bool terminating =
      detail::near_nonpositive_integer(a) || detail::near_nonpositive_integer(b);
  if (std::abs(z) >= 1.0 && !terminating)
    raise(errc::invalid_argument, "2F1 series needs |z| < 1");
  SeriesEvaluation ev;
  ev.method = SeriesMethod::direct_series;
  detail::KahanC acc;
  acc.add(1.0);
  Complex term = 1.0;
  int small_streak = 0;
  for (int k = 0; k < max_terms; ++k) {
    double dk = static_cast<double>(k);
    term *= (a + dk) * (b + dk) / ((c + dk) * (dk + 1.0)) * z;
    acc.add(term);
    ev.terms_used = k + 1;
    if (term == Complex(0.0)) {  // terminated exactly
      ev.converged = true;
      break;
    }
    if (std::abs(term) <= tol * std::abs(acc.sum)) {
      if (++small_streak >= 3) {
        ev.converged = true;
        break;
      }
    } else {
      small_streak = 0;
    }
  }
  ev.value = acc.sum;
  return ev;
}

/// 2F1(a, b; c; x) for real x in (0, 1) through Pfaff's transformation.
/// For x < 1/2 the mapped argument x/(x-1) lies in (-1, 0) and one Pfaff step
/// suffices; for x >= 1/2 a second Pfaff step (on the other parameter slot)
/// returns to argument x with transformed parameters, i.e. Euler's
/// transformation (1-x)^{c-a-b} 2F1(c-a, c-b; c; x).
inline SeriesEvaluation f21_pfaff(Complex a, Complex b, Complex c, double x,
                                  double tol = default_series_tol,
                                  int max_terms = default_max_terms_slow) {
  if (!(x > 0.0 && x < 1.0)) raise(errc::invalid_argument, "pfaff route needs 0 < x < 1");
  SeriesEvaluation ev;
  if (x < 0.5) {
    double u = x / (x - 1.0);
    ev = f21_series(a, c - b, c, u, tol, max_terms);
    ev.value *= std::pow(Complex(1.0 - x), -a);
  } else {
    ev = f21_series(c - a, c - b, c, Complex(x), tol, max_terms);
    ev.value *= std::pow(Complex(1.0 - x), c - a - b);
  }
  ev.method = SeriesMethod::pfaff_mapped;
  return ev;
}

/// G(t) = 2F1(alpha, conj(alpha); delta; t) for t < -1 by the two-term Barnes
/// connection formula; requires alpha - conj(alpha) nonzero, i.e. Im alpha != 0.
/// The two terms are conjugate, so the result is real up to rounding.
inline SeriesEvaluation f21_barnes_large_neg(const HypergeometricParams& p, double t,
                                             double tol = default_series_tol,
                                             int max_terms = default_max_terms) {
  if (std::abs(p.alpha.imag()) < 1e-12)
    raise(errc::real_alpha_unsupported, "Barnes connection needs Im alpha != 0");
  if (!(t < -1.0)) raise(errc::invalid_argument, "Barnes route needs t < -1");
  Complex al = p.alpha, alc = std::conj(p.alpha);
  Complex de{p.delta, 0.0};
  Complex pref1 = std::exp(log_gamma(alc - al) + log_gamma(de) - log_gamma(alc) -
                           log_gamma(de - al));
  Complex pref2 = std::exp(log_gamma(al - alc) + log_gamma(de) - log_gamma(al) -
                           log_gamma(de - alc));
  Complex invt{1.0 / t, 0.0};
  SeriesEvaluation f1 = f21_series(al, 1.0 - de + al, 1.0 - alc + al, invt, tol, max_terms);
  SeriesEvaluation f2 = f21_series(alc, 1.0 - de + alc, 1.0 - al + alc, invt, tol, max_terms);
  double log_s = std::log(-t);
  SeriesEvaluation ev;
  ev.value = pref1 * std::exp(-al * log_s) * f1.value +
             pref2 * std::exp(-alc * log_s) * f2.value;
  ev.terms_used = f1.terms_used + f2.terms_used;
  ev.converged = f1.converged && f2.converged;
  ev.method = SeriesMethod::barnes_large_arg;
  if (std::abs(ev.value.imag()) > 1e-8 * (1.0 + std::abs(ev.value)))
    raise(errc::no_convergence, "Barnes evaluation lost conjugate symmetry");
  return ev;
}

/// Real value of G(t) = 2F1(alpha, conj(alpha); delta; t) on t <= 0.
/// Dispatch:
///   t in (-1, 0]           direct series, real arithmetic (the coefficients
///                          (alpha)_k (conj alpha)_k = |(alpha)_k|^2 are real);
///   t in [-50, -1]         Pfaff back to the original parameters at argument
///                          t/(t-1) in [1/2, 1);
///   t < -50, Im alpha != 0 Barnes connection formula.
/// Real alpha never routes to Barnes (the connection formula is invalid when
/// alpha - conj(alpha) is an integer) and stays on the Pfaff route.
inline double g_real(const HypergeometricParams& p, double t,
                     double tol = default_series_tol,
                     int max_terms = default_max_terms,
                     int max_terms_slow = default_max_terms_slow) {
  if (!(t <= 0.0)) raise(errc::invalid_argument, "g_real needs t <= 0");
  if (t == 0.0) return 1.0;
  Complex al = p.alpha, alc = std::conj(p.alpha);
  double de = p.delta;
  if (t > -1.0) {
    detail::KahanR acc;
    acc.add(1.0);
    double term = 1.0;
    int small_streak = 0;
    for (int k = 0; k < max_terms; ++k) {
      double dk = static_cast<double>(k);
      double fac = std::real((al + dk) * (alc + dk)) / ((de + dk) * (dk + 1.0));
      term *= fac * t;
      acc.add(term);
      if (std::abs(term) <= tol * std::abs(acc.sum)) {
        if (++small_streak >= 3) return acc.sum;
      } else {
        small_streak = 0;
      }
    }
    raise(errc::no_convergence, "direct series for G(t) hit the term cap");
  }
  if (t >= -barnes_crossover || alpha_is_real(p)) {
    double x = t / (t - 1.0);  // in [1/2, 1)
    SeriesEvaluation ev = f21_pfaff(al, p.beta, Complex(de), x, tol, max_terms_slow);
    if (!ev.converged) raise(errc::no_convergence, "Pfaff route for G(t) hit the term cap");
    Complex v = std::pow(Complex(1.0 - t), -al) * ev.value;
    if (std::abs(v.imag()) > 1e-8 * (1.0 + std::abs(v)))
      raise(errc::no_convergence, "Pfaff route lost realness of G(t)");
    return v.real();
  }
  SeriesEvaluation ev = f21_barnes_large_neg(p, t, tol, max_terms);
  if (!ev.converged) raise(errc::no_convergence, "Barnes route hit the term cap");
  return ev.value.real();
}

}  // namespace copnorm
