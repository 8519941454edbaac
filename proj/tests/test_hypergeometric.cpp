#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "copnorm/hypergeometric.hpp"
#include "copnorm/moebius.hpp"
#include "copnorm/normcalc.hpp"
#include "copnorm/sampling.hpp"

using namespace copnorm;

namespace {

// Parameters of the paper's phi_{pi/2}: alpha = (-2+6i)/15, beta = (6+2i)/5,
// delta = 16/15.
HypergeometricParams paper_params() {
  return hypergeometric_params(qd_form(normalize_fix_one(MoebiusMap{
      Complex(15, 15), Complex(-31, 33), Complex(20, 0), Complex(-36, 48)}).map));
}

}  // namespace

TEST_CASE("series basics", "[hyp]") {
  SeriesEvaluation at0 = f21_series(Complex(0.3, 1.0), Complex(-2.0, 0.4), Complex(1.7), Complex(0.0));
  CHECK(at0.value == Complex(1.0));
  CHECK(at0.converged);

  // 2F1(1,1;2;z) = -log(1-z)/z, so at z = 1/2 the value is 2 log 2
  SeriesEvaluation dilog = f21_series(Complex(1.0), Complex(1.0), Complex(2.0), Complex(0.5));
  CHECK(dilog.converged);
  CHECK(std::abs(dilog.value - 2.0 * std::log(2.0)) < 1e-13);

  // terminating Chu-Vandermonde at z = 1: 2F1(-3,b;c;1) = (c-b)_3/(c)_3
  Complex b(1.0 / 3.0), c(1.25);
  SeriesEvaluation chu = f21_series(Complex(-3.0), b, c, Complex(1.0));
  CHECK(chu.converged);
  Complex expected = pochhammer(c - b, 3) / pochhammer(c, 3);
  CHECK(std::abs(chu.value - expected) < 1e-14);

  CHECK_THROWS_AS(f21_series(Complex(0.5), Complex(0.5), Complex(-1.0), Complex(0.2)), Error);
  CHECK_THROWS_AS(f21_series(Complex(0.5), Complex(0.5), Complex(1.0), Complex(1.2)), Error);

  // hitting the cap returns the partial sum, flagged
  SeriesEvaluation capped = f21_series(Complex(1.0), Complex(1.0), Complex(2.0), Complex(0.99),
                                       1e-14, 20);
  CHECK_FALSE(capped.converged);
  CHECK(capped.terms_used == 20);
}

TEST_CASE("series evaluation is deterministic", "[hyp]") {
  Complex a(0.31, 0.77), b(-1.21, 0.04), c(2.5, -0.3), z(0.63, 0.21);
  SeriesEvaluation e1 = f21_series(a, b, c, z);
  SeriesEvaluation e2 = f21_series(a, b, c, z);
  CHECK(e1.value.real() == e2.value.real());
  CHECK(e1.value.imag() == e2.value.imag());
  CHECK(e1.terms_used == e2.terms_used);
}

TEST_CASE("pfaff transformation agrees with the direct series", "[hyp]") {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 40; ++i) {
    Complex a{6.0 * uniform01(rng) - 3.0, 6.0 * uniform01(rng) - 3.0};
    Complex b{6.0 * uniform01(rng) - 3.0, 6.0 * uniform01(rng) - 3.0};
    Complex c{2.7 * uniform01(rng) + 0.3, 3.0 * uniform01(rng) - 1.5};
    double x = 0.02 + 0.43 * uniform01(rng);
    SeriesEvaluation direct = f21_series(a, b, c, Complex(x));
    SeriesEvaluation mapped = f21_pfaff(a, b, c, x);
    REQUIRE(direct.converged);
    REQUIRE(mapped.converged);
    CHECK(std::abs(direct.value - mapped.value) < 1e-9 * (1.0 + std::abs(direct.value)));
  }
  CHECK(std::abs(f21_pfaff(Complex(0.4, 1.0), Complex(0.2), Complex(1.1), 1e-9).value - 1.0) <
        1e-8);
}

TEST_CASE("pfaff dual evaluation at the paper parameters", "[hyp]") {
  HypergeometricParams p = paper_params();
  CHECK(std::abs(p.alpha - Complex(-2.0 / 15.0, 6.0 / 15.0)) < 1e-12);
  CHECK(std::abs(p.beta - Complex(6.0 / 5.0, 2.0 / 5.0)) < 1e-12);
  CHECK(p.delta == Catch::Approx(16.0 / 15.0).margin(1e-12));
  SeriesEvaluation direct =
      f21_series(p.alpha, p.beta, Complex(p.delta), Complex(0.3));
  SeriesEvaluation mapped = f21_pfaff(p.alpha, p.beta, Complex(p.delta), 0.3);
  CHECK(std::abs(direct.value - mapped.value) < 1e-9 * (1.0 + std::abs(direct.value)));
}

TEST_CASE("barnes connection formula", "[hyp]") {
  HypergeometricParams p = paper_params();
  // conjugate symmetry: the two-term expression is real up to rounding
  for (double t : {-2.0, -10.0, -100.0}) {
    SeriesEvaluation ev = f21_barnes_large_neg(p, t);
    CHECK(ev.converged);
    CHECK(std::abs(ev.value.imag()) < 1e-8 * (1.0 + std::abs(ev.value)));
  }
  std::mt19937_64 rng(5);
  for (int i = 0; i < 10; ++i) {
    QdForm qd = sample_qd(rng, DSample::complex_d);
    HypergeometricParams pr = hypergeometric_params(qd);
    for (double t : {-2.0, -10.0, -100.0}) {
      SeriesEvaluation ev = f21_barnes_large_neg(pr, t);
      CHECK(std::abs(ev.value.imag()) < 1e-8 * (1.0 + std::abs(ev.value)));
    }
  }

  // agreement with the Pfaff route at t = -1.5
  double via_pfaff = g_real(p, -1.5);
  SeriesEvaluation via_barnes = f21_barnes_large_neg(p, -1.5);
  CHECK(std::abs(via_barnes.value.real() - via_pfaff) < 1e-7 * (1.0 + std::abs(via_pfaff)));

  // real alpha is rejected
  HypergeometricParams realp = hypergeometric_params(QdForm{1.0, Complex(-2.0)});
  CHECK_THROWS_AS(f21_barnes_large_neg(realp, -10.0), Error);
}

TEST_CASE("barnes leading asymptote fixes the sign", "[hyp]") {
  HypergeometricParams p = paper_params();
  Complex al = p.alpha, alc = std::conj(p.alpha);
  Complex ab = std::exp(log_gamma(alc - al) + log_gamma(Complex(p.delta)) -
                        log_gamma(alc) - log_gamma(Complex(p.delta) - al));
  double A = ab.real(), B = ab.imag();
  double x = al.real(), y = al.imag();
  for (double s : {1e4, 1e5, 3e6}) {
    double asym = 2.0 * std::pow(s, -x) * (A * std::cos(y * std::log(s)) + B * std::sin(y * std::log(s)));
    double full = g_real(p, -s);
    CHECK(asym * full > 0.0);
  }
}

TEST_CASE("g_real dispatch", "[hyp]") {
  HypergeometricParams p = paper_params();
  CHECK(g_real(p, 0.0) == 1.0);

  // alternating-sign series keeps G real with G(0) = 1 and |G| finite
  for (double t : {-0.1, -0.5, -0.99}) CHECK(std::isfinite(g_real(p, t)));

  // same-point dual evaluation across the crossover
  double via_pfaff = g_real(p, -49.0);  // dispatches to the Pfaff route
  SeriesEvaluation via_barnes = f21_barnes_large_neg(p, -49.0);
  CHECK(std::abs(via_barnes.value.real() - via_pfaff) <
        1e-9 * (1.0 + std::abs(via_pfaff)));

  // real-d case runs on series/Pfaff for any depth the budget allows
  HypergeometricParams realp = hypergeometric_params(QdForm{0.5, Complex(-3.0)});
  CHECK(std::isfinite(g_real(realp, -200.0)));

  CHECK_THROWS_AS(g_real(p, 0.5), Error);
  CHECK_THROWS_AS(f21_barnes_large_neg(p, -0.5), Error);
}

TEST_CASE("gauss limit trend (light)", "[hyp]") {
  // real-d parameters have delta = alpha + beta; ratio against -log(1-x)
  // approaches Gamma(delta)/(Gamma(alpha) Gamma(beta)) from one side
  HypergeometricParams p = hypergeometric_params(QdForm{0.125, Complex(3.0)});
  CHECK(p.delta == Catch::Approx(p.alpha.real() + p.beta.real()).margin(1e-12));
  double target = (gamma(Complex(p.delta)) / (gamma(p.alpha) * gamma(p.beta))).real();
  double prev_err = 1e9;
  for (int k = 4; k <= 6; ++k) {
    double eps = std::pow(10.0, -k);
    double x = 1.0 - eps;
    int budget = static_cast<int>(4.0 / eps) + 16;
    SeriesEvaluation ev =
        f21_series(p.alpha, p.beta, Complex(p.delta), Complex(x), 1e-16, budget);
    double ratio = ev.value.real() / (-std::log(eps));
    double err = std::abs(ratio / target - 1.0);
    CHECK(err < prev_err);
    prev_err = err;
  }
  CHECK(prev_err < 0.10);
}
