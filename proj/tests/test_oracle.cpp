#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "copnorm/oracle.hpp"
#include "copnorm/sampling.hpp"

using namespace copnorm;

namespace {

const MoebiusMap phi_236{0.0, 2.0, -1.0, 3.0};
const MoebiusMap phi_pi2{Complex(15, 15), Complex(-31, 33), Complex(20, 0), Complex(-36, 48)};

}  // namespace

TEST_CASE("taylor coefficients", "[oracle]") {
  std::vector<Complex> c = taylor_coeffs(phi_236, 6);
  for (int k = 0; k < 6; ++k)
    CHECK(std::abs(c[static_cast<size_t>(k)] - 2.0 / std::pow(3.0, k + 1)) < 1e-15);

  std::vector<Complex> aff = taylor_coeffs(MoebiusMap{0.25, 0.5, 0.0, 1.0}, 4);
  CHECK(aff[0] == Complex(0.5));
  CHECK(aff[1] == Complex(0.25));
  CHECK(aff[2] == Complex(0.0));

  // partial sums converge to the map value
  std::vector<Complex> long_c = taylor_coeffs(phi_236, 200);
  Complex sum = 0.0, z(0.5);
  Complex pw = 1.0;
  for (const Complex& ck : long_c) {
    sum += ck * pw;
    pw *= z;
  }
  CHECK(std::abs(sum - phi_236(z)) < 1e-12);

  CHECK_THROWS_AS(taylor_coeffs(MoebiusMap{0.0, 1.0, -1.0, 0.5}, 8), Error);
}

TEST_CASE("operator matrix structure", "[oracle]") {
  TruncatedOperatorMatrix id = operator_matrix(identity_map(), 8);
  for (int j = 0; j < 8; ++j)
    for (int k = 0; k < 8; ++k)
      CHECK(std::abs(id.at(j, k) - (j == k ? 1.0 : 0.0)) < 1e-15);

  TruncatedOperatorMatrix half = operator_matrix(MoebiusMap{0.5, 0.0, 0.0, 1.0}, 16);
  for (int k = 0; k < 16; ++k)
    CHECK(std::abs(half.at(k, k) - std::pow(0.5, k)) < 1e-15);

  // column 0 is e0; column 2 is the truncated self-convolution of column 1
  TruncatedOperatorMatrix m = operator_matrix(phi_236, 32);
  CHECK(std::abs(m.at(0, 0) - 1.0) < 1e-15);
  for (int j = 1; j < 32; ++j) CHECK(std::abs(m.at(j, 0)) == 0.0);
  for (int j = 0; j < 32; ++j) {
    Complex conv = 0.0;
    for (int i = 0; i <= j; ++i) conv += m.at(i, 1) * m.at(j - i, 1);
    CHECK(std::abs(m.at(j, 2) - conv) < 1e-14);
  }
}

TEST_CASE("matrix columns evaluate to powers of the map", "[oracle]") {
  std::mt19937_64 rng(3);
  TruncatedOperatorMatrix m = operator_matrix(phi_236, 64);
  for (int trial = 0; trial < 10; ++trial) {
    Complex z = std::polar(0.4 * std::sqrt(uniform01(rng)), 6.28 * uniform01(rng));
    Complex phi_z = phi_236(z);
    for (int k : {1, 3, 7}) {
      Complex row_sum = 0.0, pw = 1.0;
      for (int j = 0; j < 64; ++j) {
        row_sum += m.at(j, k) * pw;
        pw *= z;
      }
      Complex direct = std::pow(phi_z, k);
      CHECK(std::abs(row_sum - direct) < 1e-8 * (1.0 + std::abs(direct)));
    }
  }
}

TEST_CASE("column norms respect the operator bound", "[oracle]") {
  for (const MoebiusMap* mp : {&phi_236, &phi_pi2}) {
    double p0 = std::abs((*mp)(Complex(0.0)));
    double bound = std::sqrt((1.0 + p0) / (1.0 - p0));
    TruncatedOperatorMatrix m = operator_matrix(*mp, 64);
    for (int k = 0; k < 64; ++k) {
      double col = 0.0;
      for (int j = 0; j < 64; ++j) col += std::norm(m.at(j, k));
      CHECK(std::sqrt(col) <= bound + 1e-9);
    }
  }
}

TEST_CASE("truncated norm of simple maps", "[oracle]") {
  CHECK(truncated_norm_sq(operator_matrix(identity_map(), 32)).value ==
        Catch::Approx(1.0).margin(1e-10));
  CHECK(truncated_norm_sq(operator_matrix(MoebiusMap{0.5, 0.0, 0.0, 1.0}, 32)).value ==
        Catch::Approx(1.0).margin(1e-10));
}

TEST_CASE("finite sections increase toward the norm", "[oracle]") {
  NormReport rep = norm_sq(phi_236);
  double prev = 0.0;
  for (int n : {32, 64, 128}) {
    PowerIterationResult pi = truncated_norm_sq(operator_matrix(phi_236, n));
    CHECK(pi.converged);
    CHECK(pi.value >= prev - 1e-10);
    CHECK(pi.value <= rep.norm_sq + 1e-6);
    prev = pi.value;
  }
  CHECK(prev >= 0.97 * rep.norm_sq);
}

TEST_CASE("key series fundamentals", "[oracle]") {
  QdForm qd{1.0, Complex(-2.0)};
  MoebiusMap phi = from_qd(qd);
  Complex chi0 = chi_at(phi, phi(Complex(0.0)));

  // leading coefficient a0 = chi(phi(0)): the series behaves like a0 x as x -> 0
  double x_small = 1e-8;
  SeriesEvaluation tiny = key_series_lhs(qd, x_small);
  CHECK(std::abs(tiny.value / x_small - chi0) < 1e-6);

  // x -> 0+ drives the sum to 0
  CHECK(std::abs(key_series_lhs(qd, 1e-12).value) < 1e-10);

  // cap exhaustion is flagged, not thrown
  SeriesEvaluation starved = key_series_lhs(qd, 0.9 * qd.q, 10);
  CHECK_FALSE(starved.converged);
  CHECK(starved.terms_used == 10);

  CHECK_THROWS_AS(key_series_lhs(qd, 1.5), Error);  // x >= q
  CHECK_THROWS_AS(key_series_lhs(QdForm{2.0, Complex(-3.0)}, 0.1), Error);  // b = 0
}

TEST_CASE("identity residual battery", "[oracle]") {
  CHECK(identity_residual(QdForm{1.0, Complex(-2.0)}, 0.3) < 1e-10);

  QdForm qd_pi2 = qd_form(normalize_fix_one(phi_pi2).map);
  CHECK(identity_residual(qd_pi2, qd_pi2.q / 4.0) < 1e-10);
  CHECK(identity_residual(qd_pi2, 1e-6) < 1e-12);

  std::mt19937_64 rng(23);
  for (int i = 0; i < 20; ++i) {
    QdForm qd = sample_qd(rng, i % 2 ? DSample::complex_d : DSample::real_negative);
    for (double frac : {0.1, 0.25, 0.4})
      CHECK(identity_residual(qd, frac * qd.q) < 1e-9);
  }

  CHECK_THROWS_AS(identity_residual(QdForm{1.0, Complex(-2.0)}, 0.6), Error);
}

TEST_CASE("triple agreement for real d < -1", "[oracle]") {
  for (QdForm qd : {QdForm{0.5, Complex(-3.0)}, QdForm{1.0, Complex(-2.0)}}) {
    auto root = solve_norm_equation(qd);
    REQUIRE(root.has_value());
    auto direct = bisect_norm_direct(qd);
    REQUIRE(direct.has_value());
    CHECK(std::abs(*direct - root->lambda) <= 1e-8 * root->lambda);
    double matrix = truncated_norm_sq(operator_matrix(from_qd(qd), 512)).value;
    CHECK(matrix <= root->lambda + 1e-6);
    CHECK(matrix >= 0.98 * root->lambda);
  }
}

TEST_CASE("matrix oracle certifies a complex-d family member", "[oracle]") {
  MoebiusMap m = theta_family(2.0);
  NormReport rep = norm_sq(m);
  REQUIRE(rep.root.has_value());
  double matrix = truncated_norm_sq(operator_matrix(m, 512)).value;
  CHECK(matrix <= rep.norm_sq + 1e-6);
  CHECK(matrix >= 0.98 * rep.norm_sq);
}

TEST_CASE("direct bisection agrees with the hypergeometric root", "[oracle]") {
  auto lam = bisect_norm_direct(QdForm{0.5, Complex(-3.0)});
  REQUIRE(lam.has_value());
  auto root = solve_norm_equation(QdForm{0.5, Complex(-3.0)});
  REQUIRE(root.has_value());
  CHECK(*lam == Catch::Approx(root->lambda).epsilon(1e-8));

  CHECK_FALSE(bisect_norm_direct(QdForm{0.125, Complex(3.0)}).has_value());

  auto lam2 = bisect_norm_direct(QdForm{1.0, Complex(-2.0)});
  REQUIRE(lam2.has_value());
  CHECK(*lam2 > 1.0);
  CHECK(*lam2 == Catch::Approx(1.43922883989064515).epsilon(1e-8));

  CHECK_THROWS_AS(bisect_norm_direct(qd_form(normalize_fix_one(phi_pi2).map)), Error);
}
