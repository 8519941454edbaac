#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>

#include "copnorm/error.hpp"

namespace copnorm {

using Complex = std::complex<double>;

inline constexpr double tol_degenerate = 1e-12;   // |ad-bc| on normalized coefficients
inline constexpr double tol_projective = 1e-10;   // coefficient agreement after normalization
inline constexpr double tol_boundary = 1e-10;     // tangency / automorphism detection
inline constexpr double default_tol = 1e-12;

inline bool is_finite(Complex z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// The linear fractional map z -> (a z + b)/(c z + d).  Coefficients are
/// only meaningful up to a common nonzero complex scale.
struct MoebiusMap {
  Complex a{1.0}, b{0.0}, c{0.0}, d{1.0};

  MoebiusMap() = default;
  MoebiusMap(Complex a_, Complex b_, Complex c_, Complex d_) : a(a_), b(b_), c(c_), d(d_) {
    if (!is_finite(a) || !is_finite(b) || !is_finite(c) || !is_finite(d))
      raise(errc::invalid_argument, "non-finite Moebius coefficient");
    double m = max_coef_mod();
    if (m == 0.0) raise(errc::degenerate_map, "all coefficients vanish");
    if (std::max(std::abs(c), std::abs(d)) <= tol_degenerate * m)
      raise(errc::degenerate_map, "denominator vanishes identically");
  }

  double max_coef_mod() const {
    return std::max(std::max(std::abs(a), std::abs(b)), std::max(std::abs(c), std::abs(d)));
  }

  /// Scale so the largest-modulus coefficient becomes exactly 1.
  MoebiusMap normalized() const {
    const Complex* coefs[4] = {&a, &b, &c, &d};
    const Complex* top = coefs[0];
    for (const Complex* p : coefs)
      if (std::abs(*p) > std::abs(*top)) top = p;
    Complex s = 1.0 / *top;
    MoebiusMap m;
    m.a = a * s; m.b = b * s; m.c = c * s; m.d = d * s;
    return m;
  }

  Complex det() const { return a * d - b * c; }

  bool is_constant() const { return std::abs(normalized().det()) <= tol_degenerate; }

  bool is_affine() const { return std::abs(c) <= 1e-12 * max_coef_mod(); }

  /// Value of a constant map (rank-one coefficient matrix).
  Complex constant_value() const {
    return std::abs(c) >= std::abs(d) ? a / c : b / d;
  }

  /// Evaluate the map.  (A plain name like `apply` collides with std::apply
  /// through argument-dependent lookup on std::complex.)
  Complex operator()(Complex z) const {
    Complex den = c * z + d;
    double scale = max_coef_mod() * std::max(1.0, std::abs(z));
    if (std::abs(den) <= tol_degenerate * scale)
      raise(errc::pole_at_input, "evaluation at the pole of the map");
    return (a * z + b) / den;
  }
};

inline MoebiusMap identity_map() { return MoebiusMap{1.0, 0.0, 0.0, 1.0}; }

inline MoebiusMap compose(const MoebiusMap& outer, const MoebiusMap& inner) {
  return MoebiusMap{outer.a * inner.a + outer.b * inner.c,
                    outer.a * inner.b + outer.b * inner.d,
                    outer.c * inner.a + outer.d * inner.c,
                    outer.c * inner.b + outer.d * inner.d};
}

inline MoebiusMap inverse(const MoebiusMap& m) {
  if (m.is_constant()) raise(errc::degenerate_map, "constant map has no inverse");
  return MoebiusMap{m.d, -m.b, -m.c, m.a};
}

inline Complex derivative_at(const MoebiusMap& m, Complex z) {
  Complex den = m.c * z + m.d;
  double scale = m.max_coef_mod() * std::max(1.0, std::abs(z));
  if (std::abs(den) <= tol_degenerate * scale)
    raise(errc::pole_at_input, "derivative at the pole of the map");
  return m.det() / (den * den);
}

/// Equality up to a common coefficient scale.
inline bool projectively_equal(const MoebiusMap& lhs, const MoebiusMap& rhs,
                               double tol = tol_projective) {
  MoebiusMap x = lhs.normalized(), y = rhs.normalized();
  // The normalizing coefficient may differ between the two maps; align the
  // scales through the coefficient of largest joint modulus.
  Complex rx[4] = {x.a, x.b, x.c, x.d};
  Complex ry[4] = {y.a, y.b, y.c, y.d};
  int top = 0;
  for (int i = 1; i < 4; ++i)
    if (std::abs(rx[i]) + std::abs(ry[i]) > std::abs(rx[top]) + std::abs(ry[top])) top = i;
  if (std::abs(ry[top]) == 0.0) return false;
  Complex s = rx[top] / ry[top];
  for (int i = 0; i < 4; ++i)
    if (std::abs(rx[i] - s * ry[i]) > tol) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

enum class MapKind {
  constant_map,
  affine_self_map,
  strictly_inside,
  automorphism,
  tangent_non_affine_non_auto,
};

enum class AutomorphismKind { elliptic, parabolic, hyperbolic };

struct MapClass {
  MapKind kind;
  std::optional<AutomorphismKind> subtag;  // present iff kind == automorphism
};

inline const char* map_kind_name(MapKind k) {
  switch (k) {
    case MapKind::constant_map: return "constant";
    case MapKind::affine_self_map: return "affine_self_map";
    case MapKind::strictly_inside: return "strictly_inside";
    case MapKind::automorphism: return "automorphism";
    case MapKind::tangent_non_affine_non_auto: return "tangent_non_affine_non_auto";
  }
  return "unknown";
}

inline const char* automorphism_kind_name(AutomorphismKind k) {
  switch (k) {
    case AutomorphismKind::elliptic: return "elliptic";
    case AutomorphismKind::parabolic: return "parabolic";
    case AutomorphismKind::hyperbolic: return "hyperbolic";
  }
  return "unknown";
}

struct ImageDisk {
  Complex center;
  double radius;
};

/// Image of the unit disk under the map, computed by circumscribing the
/// images of the boundary points 1, -1, i.
inline ImageDisk image_disk(const MoebiusMap& m) {
  if (!m.is_affine()) {
    Complex pole = -m.d / m.c;
    if (std::abs(pole) <= 1.0 + tol_degenerate)
      raise(errc::pole_in_disk, "pole lies in the closed unit disk");
  }
  if (m.is_constant()) return ImageDisk{m.constant_value(), 0.0};
  Complex w1 = m(Complex(1.0, 0.0));
  Complex w2 = m(Complex(-1.0, 0.0));
  Complex w3 = m(Complex(0.0, 1.0));
  // Circumcenter: solve 2 Re(conj(wj - w1) zc) = |wj|^2 - |w1|^2, j = 2,3.
  Complex u = w2 - w1, v = w3 - w1;
  double b1 = 0.5 * (std::norm(w2) - std::norm(w1));
  double b2 = 0.5 * (std::norm(w3) - std::norm(w1));
  double det = u.real() * v.imag() - u.imag() * v.real();
  if (det == 0.0) raise(errc::degenerate_map, "collinear boundary images");
  double cx = (b1 * v.imag() - b2 * u.imag()) / det;
  double cy = (u.real() * b2 - v.real() * b1) / det;
  Complex center{cx, cy};
  double radius = (std::abs(w1 - center) + std::abs(w2 - center) + std::abs(w3 - center)) / 3.0;
  return ImageDisk{center, radius};
}

/// Both fixed points of a non-identity map; for affine maps the second
/// slot holds infinity encoded as a quiet NaN pair.
inline std::pair<Complex, Complex> fixed_points(const MoebiusMap& m0) {
  MoebiusMap m = m0.normalized();
  const Complex nanc{std::nan(""), std::nan("")};
  if (m.is_affine()) {
    Complex s = m.a / m.d, t = m.b / m.d;
    Complex den = 1.0 - s;
    if (std::abs(den) <= 1e-14) return {nanc, nanc};  // identity-like
    return {t / den, nanc};
  }
  // c z^2 + (d - a) z - b = 0
  Complex A = m.c, B = m.d - m.a, C = -m.b;
  Complex disc = std::sqrt(B * B - 4.0 * A * C);
  // Stable quadratic: pick the sign that avoids cancellation.
  Complex r = (std::real(std::conj(B) * disc) >= 0.0) ? (-B - disc) : (-B + disc);
  Complex z1 = r / (2.0 * A);
  Complex z2 = (std::abs(r) > 0.0) ? (2.0 * C) / r : (-B + disc) / (2.0 * A);
  return {z1, z2};
}

inline AutomorphismKind automorphism_subtag(const MoebiusMap& m) {
  auto [z1, z2] = fixed_points(m);
  if (!is_finite(z1) && !is_finite(z2)) return AutomorphismKind::elliptic;  // identity
  if (!is_finite(z2)) {
    // Affine automorphism = rotation about an interior point.
    return AutomorphismKind::elliptic;
  }
  bool b1 = std::abs(std::abs(z1) - 1.0) <= tol_boundary;
  bool b2 = std::abs(std::abs(z2) - 1.0) <= tol_boundary;
  if (b1 && b2) {
    return (std::abs(z1 - z2) <= 1e-8) ? AutomorphismKind::parabolic
                                       : AutomorphismKind::hyperbolic;
  }
  return AutomorphismKind::elliptic;
}

inline MapClass classify(const MoebiusMap& m, double tol = default_tol) {
  if (m.is_constant()) {
    Complex t = m.constant_value();
    if (std::abs(t) >= 1.0 - tol_boundary)
      raise(errc::not_self_map, "constant map with |value| >= 1");
    return MapClass{MapKind::constant_map, std::nullopt};
  }
  if (!m.is_affine()) {
    Complex pole = -m.d / m.c;
    if (std::abs(pole) <= 1.0 + tol_degenerate)
      raise(errc::not_self_map, "pole inside the closed unit disk");
  }
  ImageDisk disk = image_disk(m);
  double sup = std::abs(disk.center) + disk.radius;
  double band = std::max(tol, tol_boundary);
  if (sup > 1.0 + band) raise(errc::not_self_map, "image disk leaves the unit disk");
  if (std::abs(sup - 1.0) <= tol_boundary && std::abs(disk.radius - 1.0) <= tol_boundary)
    return MapClass{MapKind::automorphism, automorphism_subtag(m)};
  if (sup < 1.0 - tol_boundary)
    return MapClass{MapKind::strictly_inside, std::nullopt};
  // Boundary-touching, radius < 1.
  if (m.is_affine()) return MapClass{MapKind::affine_self_map, std::nullopt};
  return MapClass{MapKind::tangent_non_affine_non_auto, std::nullopt};
}

// ---------------------------------------------------------------------------
// Tangency and normalization
// ---------------------------------------------------------------------------

struct TangencyPair {
  Complex zeta;  // boundary preimage
  Complex eta;   // boundary image, phi(zeta) = eta
};

inline TangencyPair tangency_point(const MoebiusMap& m, double tol = default_tol) {
  ImageDisk disk = image_disk(m);
  double sup = std::abs(disk.center) + disk.radius;
  if (std::abs(sup - 1.0) > std::max(tol, tol_boundary))
    raise(errc::not_tangent, "image disk is not internally tangent to the unit circle");
  Complex eta = disk.center * (1.0 + disk.radius / std::abs(disk.center));
  Complex zeta = inverse(m)(eta);
  return TangencyPair{zeta, eta};
}

struct NormalizedMap {
  MoebiusMap map;  // z -> conj(eta) * phi(zeta z); fixes the point 1
  Complex zeta;
  Complex eta;
};

/// Conjugate by rotations so the tangency pair moves to (1, 1).  The induced
/// composition operator keeps its norm and essential norm.
inline NormalizedMap normalize_fix_one(const MoebiusMap& m, double tol = default_tol) {
  TangencyPair tp = tangency_point(m, tol);
  Complex etab = std::conj(tp.eta);
  MoebiusMap n{m.a * tp.zeta * etab, m.b * etab, m.c * tp.zeta, m.d};
  return NormalizedMap{n, tp.zeta, tp.eta};
}

// ---------------------------------------------------------------------------
// The (q, d) normal form
// ---------------------------------------------------------------------------

/// Normal form of a non-affine self-map fixing 1:
///   phi(z) = ((1 + q + q d) z + (d - q - q d)) / (z + d),
/// with q = phi'(1) > 0 and |d| > 1.
struct QdForm {
  double q;
  Complex d;
};

/// Left side of the self-map criterion Re{(d-1)/(d+1)} >= q.
inline double self_map_margin(const QdForm& qd) {
  Complex r = (qd.d - 1.0) / (qd.d + 1.0);
  return r.real() - qd.q;
}

inline QdForm qd_form(const MoebiusMap& m, double tol = default_tol) {
  if (m.is_affine()) raise(errc::affine_input, "affine map has no qd-form");
  if (m.is_constant()) raise(errc::degenerate_map, "constant map has no qd-form");
  Complex at1 = m(Complex(1.0, 0.0));
  if (std::abs(at1 - 1.0) > std::max(tol, 1e-10))
    raise(errc::not_fixing_one, "map does not fix the point 1");
  Complex qc = derivative_at(m, Complex(1.0, 0.0));
  if (std::abs(qc.imag()) > std::max(tol, 1e-10) * (1.0 + std::abs(qc)))
    raise(errc::nonreal_derivative, "derivative at 1 is not real");
  double q = qc.real();
  if (q <= 0.0) raise(errc::not_self_map, "derivative at the fixed point is not positive");
  Complex d = m.d / m.c;
  if (std::abs(d) <= 1.0) raise(errc::not_self_map, "qd-recovery yields |d| <= 1");
  QdForm qd{q, d};
  if (self_map_margin(qd) < -1e-9)
    raise(errc::not_self_map, "self-map criterion Re{(d-1)/(d+1)} >= q fails");
  return qd;
}

inline MoebiusMap from_qd(const QdForm& qd, double tol = default_tol) {
  if (!(qd.q > 0.0)) raise(errc::invalid_argument, "q must be positive");
  if (!(std::abs(qd.d) > 1.0)) raise(errc::invalid_argument, "|d| must exceed 1");
  if (self_map_margin(qd) < -tol)
    raise(errc::self_map_violation, "(q, d) violates the self-map criterion");
  Complex qdprod = qd.q * qd.d;
  return MoebiusMap{1.0 + qd.q + qdprod, qd.d - qd.q - qdprod, 1.0, qd.d};
}

/// b = (|d|^2 - q |1+d|^2 - 1) / (q |1+d|^2); the half-plane conjugate of
/// tau is the translation z -> z + 2b.
inline double b_param(const QdForm& qd) {
  double h = std::norm(1.0 + qd.d);
  return (std::norm(qd.d) - qd.q * h - 1.0) / (qd.q * h);
}

// ---------------------------------------------------------------------------
// Auxiliary maps
// ---------------------------------------------------------------------------

/// Cowen's sigma: sigma(z) = (conj(a) z - conj(c)) / (-conj(b) z + conj(d)).
inline MoebiusMap sigma_map(const MoebiusMap& m) {
  if (m.is_constant()) raise(errc::degenerate_map, "sigma of a constant map");
  return MoebiusMap{std::conj(m.a), -std::conj(m.c), -std::conj(m.b), std::conj(m.d)};
}

inline Complex psi_at(const MoebiusMap& m, Complex z) {
  Complex den = (std::conj(m.a) * z - std::conj(m.c)) * (-std::conj(m.b) * z + std::conj(m.d));
  double scale = m.max_coef_mod() * m.max_coef_mod() * std::max(1.0, std::norm(z));
  if (std::abs(den) <= tol_degenerate * scale)
    raise(errc::pole_at_input, "psi evaluated at a pole");
  return std::conj(m.a * m.d - m.b * m.c) * z / den;
}

inline Complex chi_at(const MoebiusMap& m, Complex z) {
  Complex den = -std::conj(m.a) * z + std::conj(m.c);
  double scale = m.max_coef_mod() * std::max(1.0, std::abs(z));
  if (std::abs(den) <= tol_degenerate * scale)
    raise(errc::pole_at_input, "chi evaluated at a pole");
  return std::conj(m.c) / den;
}

/// k-fold iterate of tau from the closed form
///   tau^[k](z) = ((1 - k b) z + k b) / (-k b z + 1 + k b).
inline Complex tau_iterate(const QdForm& qd, long long k, Complex z) {
  if (k < 0) raise(errc::invalid_argument, "negative iterate");
  double kb = static_cast<double>(k) * b_param(qd);
  Complex den = -kb * z + (1.0 + kb);
  if (std::abs(den) <= tol_degenerate * (1.0 + kb) * std::max(1.0, std::abs(z)))
    raise(errc::pole_at_input, "tau iterate evaluated at a pole");
  return ((1.0 - kb) * z + kb) / den;
}

// ---------------------------------------------------------------------------
// The rotated family phi_theta built from phi(z) = 2/(3 - z)
// ---------------------------------------------------------------------------

/// Rotates the image disk of phi(z) = 2/(3-z) about its center 3/4 while
/// keeping 1 fixed:  phi_theta(z) = e^{-i theta} (phi(lambda z) - 3/4) + 3/4
/// with the unimodular lambda chosen so that phi(lambda) = (3 + e^{i theta})/4.
/// At theta = 0 this is phi itself; at theta = pi it is (3z/2 + 5/2)/(z + 3).
inline MoebiusMap theta_family(double theta) {
  Complex eit = std::polar(1.0, theta);
  Complex emit = std::polar(1.0, -theta);
  Complex lambda = (1.0 + 3.0 * eit) / (3.0 + eit);
  // 4 * phi_theta, with phi(lambda z) = 2/(3 - lambda z) expanded in place.
  return MoebiusMap{3.0 * lambda * (emit - 1.0), 9.0 - emit, -4.0 * lambda, 12.0};
}

}  // namespace copnorm
