#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "copnorm/error.hpp"
#include "copnorm/hypergeometric.hpp"
#include "copnorm/moebius.hpp"
#include "copnorm/normcalc.hpp"

namespace copnorm {

/// First n Taylor coefficients of phi about 0.  For c != 0,
///   phi(z) = a/c + ((bc - ad)/(cd)) sum_k (-c/d)^k z^k;
/// affine maps contribute just the two leading coefficients.
inline std::vector<Complex> taylor_coeffs(const MoebiusMap& m, int n) {
  if (n <= 0) raise(errc::invalid_argument, "need n > 0 coefficients");
  std::vector<Complex> out(static_cast<size_t>(n), Complex(0.0));
  if (m.is_affine()) {
    out[0] = m.b / m.d;
    if (n > 1) out[1] = m.a / m.d;
    return out;
  }
  Complex pole = -m.d / m.c;
  if (std::abs(pole) <= 1.0 + tol_degenerate)
    raise(errc::pole_in_disk, "pole in the closed unit disk");
  Complex ratio = -m.c / m.d;
  Complex base = (m.b * m.c - m.a * m.d) / (m.c * m.d);
  out[0] = m.b / m.d;
  Complex pw = base;
  for (int k = 1; k < n; ++k) {
    pw *= ratio;
    out[static_cast<size_t>(k)] = pw;
  }
  return out;
}

/// Finite section of C_phi in the monomial basis: entry (j, k) is the j-th
/// Taylor coefficient of phi^k, truncated at degree n-1.
struct TruncatedOperatorMatrix {
  int n = 0;
  std::vector<Complex> entries;  // column-major, n*n

  Complex& at(int j, int k) { return entries[static_cast<size_t>(k) * n + j]; }
  Complex at(int j, int k) const { return entries[static_cast<size_t>(k) * n + j]; }
};

inline TruncatedOperatorMatrix operator_matrix(const MoebiusMap& m, int n) {
  std::vector<Complex> phi = taylor_coeffs(m, n);
  TruncatedOperatorMatrix M;
  M.n = n;
  M.entries.assign(static_cast<size_t>(n) * n, Complex(0.0));
  M.at(0, 0) = 1.0;
  std::vector<Complex> cur(static_cast<size_t>(n), Complex(0.0));
  cur[0] = 1.0;
  std::vector<Complex> nxt(static_cast<size_t>(n));
  for (int k = 1; k < n; ++k) {
    std::fill(nxt.begin(), nxt.end(), Complex(0.0));
    for (int j = 0; j < n; ++j) {
      Complex cj = cur[static_cast<size_t>(j)];
      if (cj == Complex(0.0)) continue;
      for (int i = 0; i + j < n; ++i) nxt[static_cast<size_t>(i + j)] += cj * phi[static_cast<size_t>(i)];
    }
    cur = nxt;
    for (int j = 0; j < n; ++j) M.at(j, k) = cur[static_cast<size_t>(j)];
  }
  return M;
}

struct PowerIterationResult {
  double value = 0.0;  // largest eigenvalue of M*M, i.e. top squared singular value
  int iterations = 0;
  bool converged = false;
};

namespace detail {

inline void matvec(const TruncatedOperatorMatrix& M, const std::vector<Complex>& v,
                   std::vector<Complex>& out) {
  int n = M.n;
  std::fill(out.begin(), out.end(), Complex(0.0));
  for (int k = 0; k < n; ++k) {
    Complex vk = v[static_cast<size_t>(k)];
    if (vk == Complex(0.0)) continue;
    const Complex* col = &M.entries[static_cast<size_t>(k) * n];
    for (int j = 0; j < n; ++j) out[static_cast<size_t>(j)] += col[j] * vk;
  }
}

inline void matvec_adjoint(const TruncatedOperatorMatrix& M, const std::vector<Complex>& v,
                           std::vector<Complex>& out) {
  int n = M.n;
  for (int k = 0; k < n; ++k) {
    const Complex* col = &M.entries[static_cast<size_t>(k) * n];
    Complex s = 0.0;
    for (int j = 0; j < n; ++j) s += std::conj(col[j]) * v[static_cast<size_t>(j)];
    out[static_cast<size_t>(k)] = s;
  }
}

inline double norm2(const std::vector<Complex>& v) {
  double s = 0.0;
  for (Complex z : v) s += std::norm(z);
  return std::sqrt(s);
}

inline PowerIterationResult power_iterate(const TruncatedOperatorMatrix& M,
                                          std::vector<Complex> v, double tol, int max_iter) {
  int n = M.n;
  std::vector<Complex> mv(static_cast<size_t>(n)), w(static_cast<size_t>(n));
  double nv = norm2(v);
  for (auto& z : v) z /= nv;
  PowerIterationResult res;
  double rho_prev = -1.0;
  int stable = 0;
  for (int it = 0; it < max_iter; ++it) {
    matvec(M, v, mv);
    double rho = 0.0;
    for (Complex z : mv) rho += std::norm(z);  // v normalized: rho = ||Mv||^2
    matvec_adjoint(M, mv, w);
    double nw = norm2(w);
    if (nw == 0.0) {  // v in the kernel of M*M
      res.value = 0.0;
      res.iterations = it + 1;
      res.converged = true;
      return res;
    }
    for (size_t i = 0; i < w.size(); ++i) v[i] = w[i] / nw;
    res.value = rho;
    res.iterations = it + 1;
    if (rho_prev >= 0.0 && std::abs(rho - rho_prev) <= tol * rho) {
      if (++stable >= 2) {
        res.converged = true;
        return res;
      }
    } else {
      stable = 0;
    }
    rho_prev = rho;
  }
  return res;
}

}  // namespace detail

/// Largest eigenvalue of M*M via power iteration: all-ones start, one
/// deterministic pseudo-random restart if the Rayleigh quotient fails to
/// settle.  The value is nondecreasing in n and a lower bound for the true
/// squared norm.
inline PowerIterationResult truncated_norm_sq(const TruncatedOperatorMatrix& M,
                                              double tol = 1e-12, int max_iter = 20000) {
  std::vector<Complex> v(static_cast<size_t>(M.n), Complex(1.0));
  PowerIterationResult first = detail::power_iterate(M, v, tol, max_iter);
  if (first.converged) return first;
  std::uint64_t state = 0x9e3779b97f4a7c15ull;  // fixed seed, reproducible restart
  for (auto& z : v) {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    double re = static_cast<double>(state >> 11) * 0x1.0p-53 - 0.5;
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    double im = static_cast<double>(state >> 11) * 0x1.0p-53 - 0.5;
    z = Complex(re, im);
  }
  PowerIterationResult second = detail::power_iterate(M, v, tol, max_iter);
  return second.value >= first.value ? second : first;
}

// ---------------------------------------------------------------------------
// The defining norm series (direct evaluation through tau-iterates)
// ---------------------------------------------------------------------------

inline constexpr int default_key_series_cap = 200000;

/// Partial sum of sum_k chi(tau^[k](phi(0))) [prod_{m<k} psi(tau^[m](phi(0)))] x^{k+1}
/// with tau-iterates from the closed form; the running product is folded into
/// the term so no intermediate over/underflows.  Ratio -> x/q < 1 for x < q.
inline SeriesEvaluation key_series_lhs(const QdForm& qd, double x,
                                       int k_max = default_key_series_cap,
                                       double tol = default_series_tol) {
  if (!(x > 0.0 && x < qd.q))
    raise(errc::invalid_argument, "key series needs 0 < x < q");
  if (!(b_param(qd) > 0.0))
    raise(errc::automorphism_boundary, "key series needs b > 0");
  MoebiusMap phi = from_qd(qd);
  Complex z0 = phi(Complex(0.0));
  SeriesEvaluation ev;
  ev.method = SeriesMethod::direct_series;
  detail::KahanC acc;
  Complex carried = x;  // x^{k+1} * prod_{m<k} psi(tau^[m](z0))
  int small_streak = 0;
  for (int k = 0; k < k_max; ++k) {
    Complex tk = tau_iterate(qd, k, z0);
    Complex term = chi_at(phi, tk) * carried;
    acc.add(term);
    ev.terms_used = k + 1;
    if (std::abs(term) <= tol * std::abs(acc.sum)) {
      if (++small_streak >= 3) {
        ev.converged = true;
        break;
      }
    } else {
      small_streak = 0;
    }
    carried *= psi_at(phi, tk) * x;
  }
  ev.value = acc.sum;
  return ev;
}

/// | key series at x  -  (1 - 2F1(alpha, beta; delta; x/q)) |.
/// A small value certifies the hypergeometric representation numerically.
inline double identity_residual(const QdForm& qd, double x,
                                int k_max = default_key_series_cap,
                                double tol = default_series_tol,
                                int f21_max_terms = default_max_terms) {
  if (!(x > 0.0 && x < 0.5 * qd.q))
    raise(errc::invalid_argument, "identity residual needs 0 < x < q/2");
  SeriesEvaluation lhs = key_series_lhs(qd, x, k_max, tol);
  if (!lhs.converged) raise(errc::no_convergence, "key series hit the term cap");
  HypergeometricParams p = hypergeometric_params(qd);
  SeriesEvaluation rhs =
      f21_series(p.alpha, p.beta, Complex(p.delta), Complex(x / qd.q), tol, f21_max_terms);
  if (!rhs.converged) raise(errc::no_convergence, "2F1 series hit the term cap");
  return std::abs(lhs.value - (1.0 - rhs.value));
}

/// Solves key_series_lhs(qd, 1/Lambda) = 1 for the largest Lambda in
/// (1/q, (1+|phi(0)|)/(1-|phi(0)|)] by scanning downward and bisecting.
/// Real d only: the intermediate-value argument needs real coefficients.
inline std::optional<double> bisect_norm_direct(const QdForm& qd, double tol = 1e-12,
                                                int k_max = default_key_series_cap) {
  if (!d_is_real(qd)) raise(errc::complex_d_unsupported, "direct bisection needs real d");
  MoebiusMap phi = from_qd(qd);
  double p0 = std::abs(phi(Complex(0.0)));
  double upper = (1.0 + p0) / (1.0 - p0);
  double lower = (1.0 / qd.q) * (1.0 + 2e-4);  // keep the series ratio away from 1
  if (upper <= lower) return std::nullopt;
  auto lhs_minus_one = [&](double lam) {
    SeriesEvaluation ev = key_series_lhs(qd, 1.0 / lam, k_max);
    if (!ev.converged) raise(errc::no_convergence, "key series hit the term cap");
    return ev.value.real() - 1.0;
  };
  const int steps = 256;
  double ratio = std::pow(lower / upper, 1.0 / steps);
  double hi_lam = upper * (1.0 + 1e-9);
  double f_hi = lhs_minus_one(hi_lam);
  double lo_lam = hi_lam, f_lo = f_hi;
  bool bracketed = false;
  for (int i = 1; i <= steps; ++i) {
    lo_lam = upper * std::pow(ratio, i);
    f_lo = lhs_minus_one(lo_lam);
    if (f_lo * f_hi < 0.0) {
      bracketed = true;
      break;
    }
    hi_lam = lo_lam;
    f_hi = f_lo;
  }
  if (!bracketed) return std::nullopt;
  for (int it = 0; it < 200 && std::abs(hi_lam - lo_lam) > tol * hi_lam; ++it) {
    double mid = 0.5 * (lo_lam + hi_lam);
    double fm = lhs_minus_one(mid);
    if (fm == 0.0) return mid;
    if (fm * f_hi < 0.0) {
      lo_lam = mid;
      f_lo = fm;
    } else {
      hi_lam = mid;
      f_hi = fm;
    }
  }
  return 0.5 * (lo_lam + hi_lam);
}

}  // namespace copnorm
