#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "copnorm/gamma.hpp"
#include "copnorm/hypergeometric.hpp"
#include "copnorm/moebius.hpp"
#include "copnorm/normcalc.hpp"
#include "copnorm/oracle.hpp"
#include "copnorm/sampling.hpp"

namespace copnorm {

struct SuiteResult {
  std::string name;
  int passed = 0;
  int failed = 0;
  std::string first_failure;

  void check(bool ok, const std::string& what) {
    if (ok) {
      ++passed;
    } else {
      ++failed;
      if (first_failure.empty()) first_failure = what;
    }
  }
};

namespace selfcheck {

inline SuiteResult gamma_identities(double tol) {
  SuiteResult r{"gamma_identities"};
  double rec_tol = std::max(tol, 1e-10);
  double refl_tol = std::max(tol, 1e-9);
  for (double re = -5.0; re <= 5.0; re += 0.5) {
    for (double im = -5.0; im <= 5.0; im += 1.0) {
      Complex z{re + 0.25, im + 0.125};  // off the poles and the cut
      Complex g1 = gamma(z + 1.0), g0 = gamma(z);
      r.check(std::abs(g1 - z * g0) <= rec_tol * std::abs(g1), "recurrence");
      Complex refl = gamma(z) * gamma(1.0 - z);
      const double pi = 3.141592653589793238462643;
      Complex target = pi / std::sin(pi * z);
      r.check(std::abs(refl - target) <= refl_tol * std::abs(target), "reflection");
    }
  }
  return r;
}

inline SuiteResult pfaff_agreement(std::mt19937_64& rng, double tol, int cases = 60) {
  SuiteResult r{"pfaff_agreement"};
  double thr = std::max(tol, 1e-9);
  for (int i = 0; i < cases; ++i) {
    Complex a{6.0 * uniform01(rng) - 3.0, 6.0 * uniform01(rng) - 3.0};
    Complex b{6.0 * uniform01(rng) - 3.0, 6.0 * uniform01(rng) - 3.0};
    Complex c{2.5 * uniform01(rng) + 0.3, 3.0 * uniform01(rng) - 1.5};
    double x = 0.02 + 0.43 * uniform01(rng);
    SeriesEvaluation direct = f21_series(a, b, c, Complex(x));
    SeriesEvaluation mapped = f21_pfaff(a, b, c, x);
    double rel = std::abs(direct.value - mapped.value) / (1.0 + std::abs(direct.value));
    r.check(direct.converged && mapped.converged && rel <= thr, "pfaff mismatch");
  }
  return r;
}

inline SuiteResult qd_round_trips(std::mt19937_64& rng, double tol, int cases = 60) {
  SuiteResult r{"qd_round_trips"};
  double thr = std::max(tol, 1e-12);
  for (int i = 0; i < cases; ++i) {
    DSample kind = (i % 2 == 0) ? DSample::complex_d
                                : (i % 4 == 1 ? DSample::real_negative : DSample::real_positive);
    QdForm qd = sample_qd(rng, kind);
    MoebiusMap phi = from_qd(qd);
    QdForm back = qd_form(phi);
    r.check(std::abs(back.q - qd.q) <= thr * (1.0 + qd.q) &&
                std::abs(back.d - qd.d) <= thr * (1.0 + std::abs(qd.d)),
            "round trip");
    r.check(b_param(qd) >= -1e-14, "b nonnegative");
    // tau consistency and semigroup law
    Complex z{uniform01(rng) * 0.9 - 0.45, uniform01(rng) * 0.9 - 0.45};
    Complex lhs = tau_iterate(qd, 1, z);
    Complex rhs = phi(sigma_map(phi)(z));
    r.check(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(lhs)), "tau = phi o sigma");
    Complex two_step = tau_iterate(qd, 2, tau_iterate(qd, 3, z));
    Complex five = tau_iterate(qd, 5, z);
    r.check(std::abs(two_step - five) <= 1e-10, "tau semigroup");
  }
  return r;
}

inline SuiteResult identity_battery(std::mt19937_64& rng, double tol, int cases = 24) {
  SuiteResult r{"hypergeometric_identity"};
  double thr = std::max(tol, 1e-9);
  for (int i = 0; i < cases; ++i) {
    QdForm qd = sample_qd(rng, i % 2 ? DSample::complex_d : DSample::real_negative);
    for (double frac : {0.1, 0.25, 0.4}) {
      double res = identity_residual(qd, frac * qd.q);
      r.check(res < thr, "identity residual");
    }
  }
  return r;
}

inline SuiteResult dichotomy_battery(std::mt19937_64& rng, int cases = 40) {
  SuiteResult r{"root_dichotomy"};
  for (int i = 0; i < cases; ++i) {
    DSample kind = (i % 2 == 0) ? DSample::complex_d
                                : (i % 4 == 1 ? DSample::real_negative : DSample::real_positive);
    QdForm qd = sample_qd(rng, kind);
    auto root = solve_norm_equation(qd);
    bool extremal = extremal_noncompactness(qd);
    r.check(root.has_value() == !extremal, "root/classification agreement");
    if (root) r.check(root->lambda > 1.0 / qd.q, "Lambda > 1/q");
  }
  return r;
}

}  // namespace selfcheck

/// The CLI selfcheck: every module's invariant battery, deterministic in the
/// seed.  A looser tolerance only weakens thresholds.
inline std::vector<SuiteResult> run_selfcheck_suites(std::uint64_t seed, double tol) {
  std::vector<SuiteResult> out;
  std::mt19937_64 rng(seed ^ 0xc0ffee123456789ull);
  out.push_back(selfcheck::gamma_identities(tol));
  out.push_back(selfcheck::pfaff_agreement(rng, tol));
  out.push_back(selfcheck::qd_round_trips(rng, tol));
  out.push_back(selfcheck::identity_battery(rng, tol));
  out.push_back(selfcheck::dichotomy_battery(rng));
  return out;
}

}  // namespace copnorm
