#pragma once

#include <cmath>
#include <complex>
#include <optional>

#include "copnorm/error.hpp"
#include "copnorm/hypergeometric.hpp"
#include "copnorm/moebius.hpp"

namespace copnorm {

/// Knobs threaded through the norm machinery; defaults match the library's
/// series budgets.  `tol` is the geometric/root tolerance, `tol_match` decides
/// when two norm quantities count as equal in reports.
struct NormOptions {
  double tol = default_tol;
  double tol_match = 1e-8;
  double series_tol = default_series_tol;
  int max_terms = default_max_terms;
  int max_terms_slow = default_max_terms_slow;
};

enum class CohypoStatus { normal, cosubnormal, not_cohyponormal, out_of_scope };

inline const char* cohypo_status_name(CohypoStatus s) {
  switch (s) {
    case CohypoStatus::normal: return "normal";
    case CohypoStatus::cosubnormal: return "cosubnormal";
    case CohypoStatus::not_cohyponormal: return "not_cohyponormal";
    case CohypoStatus::out_of_scope: return "out_of_scope";
  }
  return "unknown";
}

struct RootInfo {
  double t_root;   // root of G on (-inf, 0), closest to zero
  double x_root;   // t/(t-1) in (0, 1)
  double lambda;   // 1/(q x_root) = ||C_phi||^2
};

struct NormReport {
  MapClass map_class{MapKind::strictly_inside, std::nullopt};
  std::optional<QdForm> qd;
  std::optional<HypergeometricParams> hyper;
  double norm_sq = 0.0;
  double ess_norm_sq = 0.0;
  double spectral_radius_sq = 0.0;
  bool extremally_noncompact = false;
  bool fast = false;
  std::optional<bool> s_star_equals_norm;
  CohypoStatus cohypo_status = CohypoStatus::out_of_scope;
  std::optional<RootInfo> root;
};

// ---------------------------------------------------------------------------
// Closed-form norms
// ---------------------------------------------------------------------------

/// Cowen's norm formula for affine phi(z) = s z + t, squared:
///   ||C_phi||^2 = 2 / (1 + |s|^2 - |t|^2 + sqrt((1 - |s|^2 + |t|^2)^2 - 4|t|^2)).
inline double cowen_affine_norm_sq(Complex s, Complex t) {
  double sm = std::abs(s), tm = std::abs(t);
  if (sm + tm > 1.0 + 1e-12) raise(errc::not_self_map, "affine map with |s| + |t| > 1");
  double inner = (1.0 - sm * sm + tm * tm);
  double disc = inner * inner - 4.0 * tm * tm;
  if (disc < 0.0) disc = 0.0;  // boundary |s|+|t| = 1 up to rounding
  return 2.0 / (1.0 + sm * sm - tm * tm + std::sqrt(disc));
}

inline bool d_is_real(const QdForm& qd) {
  return std::abs(qd.d.imag()) < 1e-10 * (1.0 + std::abs(qd.d));
}

/// ||C_phi|| = ||C_phi||_e holds exactly when d > 1 in the qd-normal form.
inline bool extremal_noncompactness(const QdForm& qd) {
  return d_is_real(qd) && qd.d.real() > 1.0;
}

/// A tangent map is fast when its image approaches the boundary closest at
/// the tangency point; in the qd-normal form this is the condition d > 0.
inline bool is_fast(const QdForm& qd) {
  return d_is_real(qd) && qd.d.real() > 0.0;
}

inline double essential_norm_sq(const MapClass& cls, const MoebiusMap& map,
                                const std::optional<QdForm>& qd) {
  switch (cls.kind) {
    case MapKind::constant_map:
    case MapKind::strictly_inside:
      return 0.0;
    case MapKind::automorphism: {
      double p = std::abs(map(Complex(0.0)));
      return (1.0 + p) / (1.0 - p);
    }
    case MapKind::affine_self_map: {
      MoebiusMap n = map.normalized();
      Complex s = n.a / n.d, t = n.b / n.d;
      if (std::abs(s) + std::abs(t) < 1.0 - tol_boundary) return 0.0;
      return cowen_affine_norm_sq(s, t);
    }
    case MapKind::tangent_non_affine_non_auto: {
      if (!qd) raise(errc::missing_qd_form, "essential norm of a tangent map needs its qd-form");
      return 1.0 / qd->q;
    }
  }
  raise(errc::invalid_argument, "unclassified map");
}

/// Denjoy-Wolff point: the unique fixed point a in the closed disk with
/// |phi'(a)| <= 1.  Constant maps fix their value.
inline Complex denjoy_wolff(const MoebiusMap& map) {
  if (map.is_constant()) return map.constant_value();
  auto [z1, z2] = fixed_points(map);
  if (!is_finite(z1) && !is_finite(z2)) return Complex(0.0);  // identity
  Complex best{0.0};
  bool found = false;
  for (Complex z : {z1, z2}) {
    if (!is_finite(z)) continue;
    if (std::abs(z) > 1.0 + 1e-9) continue;
    double dv = std::abs(derivative_at(map, z));
    if (dv <= 1.0 + 1e-8) {
      if (!found || std::abs(z) < std::abs(best)) best = z;
      found = true;
    }
  }
  if (!found) raise(errc::not_self_map, "no attracting fixed point in the closed disk");
  return best;
}

inline double spectral_radius_sq(const MapClass& cls, const MoebiusMap& map,
                                 const std::optional<QdForm>& qd) {
  (void)cls;
  Complex a = denjoy_wolff(map);
  if (std::abs(a) < 1.0 - 1e-9) return 1.0;
  // Boundary Denjoy-Wolff point: r^2 = 1/phi'(a).  When the qd-form is
  // available its q equals phi'(a) exactly (the tangency normalization fixes
  // the boundary fixed point at 1 without changing the derivative there).
  if (qd) return 1.0 / qd->q;
  return 1.0 / std::abs(derivative_at(map, a));
}

// ---------------------------------------------------------------------------
// Norm-equation parameters and root search
// ---------------------------------------------------------------------------

inline HypergeometricParams hypergeometric_params(const QdForm& qd) {
  double b = b_param(qd);
  if (b <= 1e-12)
    raise(errc::automorphism_boundary, "b = 0: automorphism boundary has no norm equation");
  double h = std::norm(1.0 + qd.d);
  double qbh = qd.q * b * h;
  HypergeometricParams p;
  p.alpha = (1.0 + qd.d) / qbh;
  p.beta = (qd.d + qd.d * std::conj(qd.d)) / qbh;
  p.delta = 1.0 / (qd.q * b);
  return p;
}

namespace detail {

struct GEval {
  const HypergeometricParams& p;
  const NormOptions& opts;
  mutable long long evals = 0;
  double operator()(double t) const {
    ++evals;
    return g_real(p, t, opts.series_tol, opts.max_terms, opts.max_terms_slow);
  }
};

}  // namespace detail

/// Finds the root of G(t) = 2F1(alpha, conj alpha; delta; t) on (-inf, 0)
/// closest to zero, scanning a geometric grid and refining by bisection with
/// secant polish.  Returns nullopt when no sign change is found and d > 1
/// (real) guarantees there is no root; throws SearchExhausted when the
/// classification promises a root that the scan could not reach.
inline std::optional<RootInfo> solve_norm_equation(const QdForm& qd,
                                                   const NormOptions& opts = {}) {
  HypergeometricParams p = hypergeometric_params(qd);
  detail::GEval g{p, opts};
  bool real_alpha = alpha_is_real(p);
  double x = p.alpha.real(), y = std::abs(p.alpha.imag());

  // Scan t = -expm1(w) on a w-grid.  The base step reproduces the geometric
  // grid t_j = -(1.25^j - 1); strongly oscillatory cases (large Im alpha) get
  // a finer step so the first crossing of cos(y ln s) cannot be stepped over.
  double h = std::min(std::log(1.25), 3.141592653589793 / (8.0 * std::max(y, 0.1)));
  // Real alpha rides the Pfaff route whose term count grows like 34.5 |t|;
  // the grid stops where the slow-branch budget ends.  Complex alpha switches
  // to the Barnes formula, cheap at any depth; the depth cap keeps
  // s^{-Re alpha} away from overflow/underflow.
  double wmax = real_alpha
                    ? std::log(0.023 * static_cast<double>(opts.max_terms_slow))
                    : std::min(207.0, 650.0 / std::max(std::abs(x), 0.1));
  double prev_t = 0.0, prev_g = 1.0;
  double lo = 0.0, hi = 0.0;  // bracket with g(lo) * g(hi) < 0, lo > hi
  bool bracketed = false;
  for (double w = std::log(1.25); w <= wmax; w += h) {
    double t = -std::expm1(w);
    double cur = g(t);
    if (prev_g * cur < 0.0) {
      lo = prev_t;
      hi = t;
      bracketed = true;
      break;
    }
    if (cur == 0.0) {  // exact hit
      lo = hi = t;
      bracketed = true;
      break;
    }
    prev_t = t;
    prev_g = cur;
  }
  if (!bracketed) {
    if (extremal_noncompactness(qd)) return std::nullopt;
    raise(errc::search_exhausted,
          "no sign change found although the classification guarantees a root");
  }

  double glo = (lo == hi) ? 0.0 : g(lo);
  while (std::abs(hi - lo) > 1e-13 * (1.0 + std::abs(hi))) {
    // Geometric midpoint once past -1: the function lives on a log scale.
    double mid = (hi < -1.0 && lo < 0.0) ? -std::sqrt(lo * hi) : 0.5 * (lo + hi);
    if (!(mid < lo && mid > hi)) mid = 0.5 * (lo + hi);
    double gm = g(mid);
    if (gm == 0.0) {
      lo = hi = mid;
      break;
    }
    if (glo * gm < 0.0) {
      hi = mid;
    } else {
      lo = mid;
      glo = gm;
    }
  }
  double t_root = 0.5 * (lo + hi);
  // Secant polish inside the bracket.
  if (lo != hi && std::abs(t_root) < 1e6) {
    double f_lo = g(lo), f_hi = g(hi);
    for (int it = 0; it < 3 && f_lo != f_hi; ++it) {
      double cand = lo - f_lo * (hi - lo) / (f_hi - f_lo);
      if (!(cand <= lo && cand >= hi)) break;
      double fc = g(cand);
      if (std::abs(fc) >= std::abs(f_lo) && std::abs(fc) >= std::abs(f_hi)) break;
      if (f_lo * fc < 0.0) {
        hi = cand;
        f_hi = fc;
      } else {
        lo = cand;
        f_lo = fc;
      }
      t_root = std::abs(f_lo) < std::abs(f_hi) ? lo : hi;
    }
  }
  RootInfo info;
  info.t_root = t_root;
  info.x_root = t_root / (t_root - 1.0);
  info.lambda = 1.0 / (qd.q * info.x_root);
  return info;
}

// ---------------------------------------------------------------------------
// Cowen-Kriete membership and cohyponormality
// ---------------------------------------------------------------------------

struct CowenKrieteParams {
  double r;
  double s;
};

inline CowenKrieteParams cowen_kriete_params(const QdForm& qd) {
  if (!d_is_real(qd)) raise(errc::nonreal_d, "Cowen-Kriete parameters need real d");
  double d = qd.d.real(), q = qd.q;
  double den = d - q - q * d;
  if (std::abs(den) < 1e-12) raise(errc::degenerate_r, "d - q - qd vanishes");
  return CowenKrieteParams{1.0 / den, q};
}

inline MoebiusMap cowen_kriete_map(double r, double s) {
  return MoebiusMap{r + s, 1.0 - s, r * (1.0 - s), 1.0 + s * r};
}

// ---------------------------------------------------------------------------
// Full report
// ---------------------------------------------------------------------------

inline NormReport norm_sq(const MoebiusMap& map, const NormOptions& opts = {}) {
  NormReport rep;
  rep.map_class = classify(map, opts.tol);
  Complex phi0 = map.is_constant() ? map.constant_value() : map(Complex(0.0));
  double p0 = std::abs(phi0);

  switch (rep.map_class.kind) {
    case MapKind::constant_map: {
      rep.norm_sq = 1.0 / (1.0 - p0 * p0);
      rep.ess_norm_sq = 0.0;
      rep.spectral_radius_sq = 1.0;
      rep.fast = false;
      rep.s_star_equals_norm = true;  // sup of the kernel ratio sits at w = 0
      rep.cohypo_status =
          (p0 <= opts.tol) ? CohypoStatus::normal : CohypoStatus::out_of_scope;
      break;
    }
    case MapKind::strictly_inside: {
      if (!map.is_affine())
        raise(errc::unsupported_exact_norm,
              "exact norm of a strictly-inside non-affine map is not known; "
              "use the truncated-matrix oracle for a lower bound");
      MoebiusMap n = map.normalized();
      Complex s = n.a / n.d, t = n.b / n.d;
      rep.norm_sq = cowen_affine_norm_sq(s, t);
      rep.ess_norm_sq = 0.0;
      rep.spectral_radius_sq = 1.0;
      rep.fast = false;
      rep.s_star_equals_norm = true;  // affine symbols satisfy ||C|| = S*
      rep.cohypo_status = (std::abs(t) <= opts.tol) ? CohypoStatus::normal
                                                    : CohypoStatus::not_cohyponormal;
      break;
    }
    case MapKind::affine_self_map: {
      MoebiusMap n = map.normalized();
      Complex s = n.a / n.d, t = n.b / n.d;
      rep.norm_sq = cowen_affine_norm_sq(s, t);
      rep.ess_norm_sq = rep.norm_sq;  // Cowen's and Shapiro's formulas coincide
      rep.spectral_radius_sq = spectral_radius_sq(rep.map_class, map, std::nullopt);
      rep.fast = true;
      rep.s_star_equals_norm = true;
      // Cohyponormality needs norm = spectral radius; that holds exactly when
      // s > 0, where a rotation conjugation brings the map to phi_{0,s}.
      rep.cohypo_status = (std::abs(rep.norm_sq - rep.spectral_radius_sq) <=
                           opts.tol_match * rep.norm_sq)
                              ? CohypoStatus::cosubnormal
                              : CohypoStatus::not_cohyponormal;
      break;
    }
    case MapKind::automorphism: {
      rep.norm_sq = (1.0 + p0) / (1.0 - p0);
      rep.ess_norm_sq = rep.norm_sq;
      rep.spectral_radius_sq = spectral_radius_sq(rep.map_class, map, std::nullopt);
      rep.fast = true;
      rep.s_star_equals_norm = true;
      if (p0 <= opts.tol) {
        rep.cohypo_status = CohypoStatus::normal;  // rotation
      } else if (*rep.map_class.subtag == AutomorphismKind::hyperbolic &&
                 std::abs(rep.norm_sq - rep.spectral_radius_sq) <=
                     opts.tol_match * rep.norm_sq) {
        rep.cohypo_status = CohypoStatus::cosubnormal;  // phi_{1,s}
      } else {
        rep.cohypo_status = CohypoStatus::not_cohyponormal;
      }
      break;
    }
    case MapKind::tangent_non_affine_non_auto: {
      NormalizedMap fixed = normalize_fix_one(map, opts.tol);
      QdForm qd = qd_form(fixed.map, opts.tol);
      rep.qd = qd;
      rep.hyper = hypergeometric_params(qd);
      rep.ess_norm_sq = 1.0 / qd.q;
      rep.root = solve_norm_equation(qd, opts);
      rep.norm_sq = rep.root ? rep.root->lambda : rep.ess_norm_sq;
      // Spectral radius follows the original map's Denjoy-Wolff point (the
      // tangency rotations preserve norms but not the spectrum).
      rep.spectral_radius_sq =
          spectral_radius_sq(rep.map_class, map,
                             std::abs(fixed.zeta - fixed.eta) < 1e-9
                                 ? std::optional<QdForm>(qd)
                                 : std::nullopt);
      rep.fast = is_fast(qd);
      if (p0 > opts.tol) {
        rep.s_star_equals_norm =
            std::abs(rep.norm_sq - rep.ess_norm_sq) <= opts.tol_match * rep.norm_sq;
      }
      // Decision table: norm = spectral radius is necessary; with d > 1 the
      // map is a Cowen-Kriete member and the adjoint is subnormal.
      bool norm_eq_radius = std::abs(rep.norm_sq - rep.spectral_radius_sq) <=
                            opts.tol_match * rep.norm_sq;
      if (!norm_eq_radius) {
        rep.cohypo_status = CohypoStatus::not_cohyponormal;
      } else if (extremal_noncompactness(qd)) {
        CowenKrieteParams ck = cowen_kriete_params(qd);
        bool member = ck.r > 0.0 && ck.r <= 1.0 + 1e-12 && ck.s > 0.0 && ck.s < 1.0;
        rep.cohypo_status =
            member ? CohypoStatus::cosubnormal : CohypoStatus::out_of_scope;
      } else {
        rep.cohypo_status = CohypoStatus::out_of_scope;
      }
      break;
    }
  }
  rep.extremally_noncompact =
      std::abs(rep.norm_sq - rep.ess_norm_sq) <= opts.tol_match * std::max(rep.norm_sq, 1.0);
  return rep;
}

inline CohypoStatus cohyponormality_status(const MoebiusMap& map,
                                           const NormOptions& opts = {}) {
  return norm_sq(map, opts).cohypo_status;
}

/// The classification fact: for univalent non-compact symbols with
/// phi(0) != 0, ||C_phi|| = S*_phi exactly when the operator is extremally
/// non-compact; affine symbols always satisfy the equality.
inline bool s_star_equals_norm(const NormReport& rep) {
  if (!rep.s_star_equals_norm)
    raise(errc::out_of_scope, "S* comparison undecided for this symbol");
  return *rep.s_star_equals_norm;
}

/// Grid supremum of ||C*_phi k_w||^2 = (1 - |w|^2)/(1 - |phi(w)|^2) over a
/// polar grid with radii 1 - 2^{-j}, refined along the ray toward the
/// tangency preimage by a golden-section pass.
inline double s_star_sq_estimate(const MoebiusMap& map, int grid_n) {
  if (grid_n < 16) raise(errc::invalid_argument, "grid_n must be at least 16");
  auto ratio = [&](Complex w) -> double {
    double pw = std::abs(map(w));
    if (pw >= 1.0) return 0.0;
    return (1.0 - std::norm(w)) / (1.0 - pw * pw);
  };
  double best = ratio(Complex(0.0));
  const double two_pi = 6.283185307179586476925286766559;
  for (int j = 1; j <= grid_n; ++j) {
    double r = 1.0 - std::ldexp(1.0, -std::min(j, 48));
    for (int i = 0; i < grid_n; ++i) {
      double ang = two_pi * static_cast<double>(i) / static_cast<double>(grid_n);
      best = std::max(best, ratio(std::polar(r, ang)));
    }
  }
  // Ray refinement toward the tangency preimage, when there is one.
  Complex zeta{0.0};
  bool have_ray = false;
  try {
    zeta = tangency_point(map).zeta;
    have_ray = true;
  } catch (const Error&) {
  }
  if (have_ray) {
    for (int j = 1; j <= 48; ++j)
      best = std::max(best, ratio(zeta * (1.0 - std::ldexp(1.0, -j))));
    // Golden-section maximization of rho -> ratio(rho zeta) on [0, 1).
    const double gr = 0.6180339887498949;
    double a = 0.0, b = 1.0 - 1e-15;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = ratio(zeta * c), fd = ratio(zeta * d);
    for (int it = 0; it < 200 && (b - a) > 1e-14; ++it) {
      if (fc > fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - gr * (b - a);
        fc = ratio(zeta * c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + gr * (b - a);
        fd = ratio(zeta * d);
      }
    }
    best = std::max(best, std::max(fc, fd));
  }
  return best;
}

}  // namespace copnorm
