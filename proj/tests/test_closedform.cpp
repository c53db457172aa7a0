#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "recmle/closedform.hpp"
#include "recmle/error.hpp"
#include "recmle/family.hpp"
#include "recmle/oracle.hpp"
#include "support/oracles.hpp"

using namespace recmle;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

// Reference values below were computed with mpmath at 50 digits.

TEST_CASE("E[F_hat] series worked values") {
  const auto e = exponential_family();
  const auto s200 = expected_cdf_hat_series(e, 1.0, 1.0, 200);
  CHECK_THAT(s200.value, WithinRel(0.633036031971622, 1e-12));
  CHECK(s200.terms_used == 200);
  CHECK(s200.in_natural_bounds);

  CHECK_THAT(expected_cdf_hat_series(e, 1.0, 0.1, 2).value, WithinAbs(0.2, 1e-15));

  const auto s2 = expected_cdf_hat_series(e, 1.0, 0.8, 2);
  CHECK_THAT(s2.value, WithinAbs(1.6, 1e-15));
  CHECK_FALSE(s2.in_natural_bounds);
  CHECK(s2.regime == Regime::truncation_suspect);
  CHECK(s2.terms_used == 2);
}

TEST_CASE("E[f_hat] series worked values") {
  const auto e = exponential_family();
  // size 2: single term 2 B A'.
  const auto s2 = expected_pdf_hat_series(e, 2.0, 0.7, 2);
  CHECK_THAT(s2.value, WithinRel(2.0 * 0.5, 1e-15));
  CHECK(s2.terms_used == 1);
  // At x = a only i = 0 survives: B A'(a) size / (size - 1).
  const auto w = weibull_family(1.0);
  CHECK_THAT(expected_pdf_hat_series(w, 1.5, 0.0, 6).value, WithinRel(1.5 * 6.0 / 5.0, 1e-14));
  CHECK_THROWS_AS(expected_pdf_hat_series(e, 1.0, 1.0, 1), ArgumentError);
}

TEST_CASE("W(alpha) series") {
  const auto e = exponential_family();
  CHECK(w_alpha_series(e, 1.0, 0.4, 7, 0.0).value == 1.0);
  // m = 3, x = 0.1, alpha = 2: y = -0.6, terms 1, y/2, y^2/2 * 1/2.
  const double y = -0.6;
  CHECK_THAT(w_alpha_series(e, 1.0, 0.1, 3, 2.0).value,
             WithinRel(1.0 + y / 2.0 + y * y / 4.0, 1e-15));
  CHECK_THROWS_AS(w_alpha_series(e, 1.0, 0.1, 3, -1.0), ArgumentError);
}

TEST_CASE("series agree with the long-double term-by-term oracle") {
  const std::vector<FamilySpec> fams{exponential_family(), lomax_family(), weibull_family(2.0),
                                     pareto_family(1.5)};
  for (const auto& fam : fams) {
    for (const double theta : {0.5, 1.0, 2.0}) {
      for (const double u : {0.05, 0.2, 0.5}) {
        const double x = quantile(fam, theta, u);
        const long double z = fam.rate(theta) * fam.transform(x);
        for (const std::size_t n : {3u, 6u, 15u, 40u}) {
          INFO(fam.name << " theta=" << theta << " x=" << x << " n=" << n);
          const long double w1 = oracle::gamma_series(n, 0, -static_cast<long double>(n) * z);
          const long double w2 = oracle::gamma_series(n, 0, -2.0L * n * z);
          const long double s1 = oracle::gamma_series(n, 1, -static_cast<long double>(n) * z);
          const long double s2 = oracle::gamma_series(n, 2, -2.0L * n * z);
          const double tol = 1e-12 * std::max(1.0L, std::abs(w2));
          CHECK_THAT(expected_cdf_hat_series(fam, theta, x, n).value,
                     WithinAbs(static_cast<double>(1.0L - w1), tol));
          CHECK_THAT(w_alpha_series(fam, theta, x, n, 2.0).value,
                     WithinAbs(static_cast<double>(w2), tol));
          const long double ba = fam.rate(theta) * fam.transform_derivative(x);
          CHECK_THAT(expected_pdf_hat_series(fam, theta, x, n).value,
                     WithinRel(static_cast<double>(n * ba * s1), 1e-10));
          const long double ez = std::exp(-z);
          const long double mse_pdf = n * n * ba * ba * s2 - 2.0L * n * ba * ba * ez * s1 +
                                      ba * ba * ez * ez;
          CHECK_THAT(mse_pdf_hat_series(fam, theta, x, n).value,
                     WithinAbs(static_cast<double>(mse_pdf),
                               1e-10 * static_cast<double>(n * n * ba * ba * std::abs(s2))));
        }
      }
    }
  }
}

TEST_CASE("MSE[F_hat] = W(2) - 2 e^{-BA} W(1) + e^{-2BA}") {
  const auto fam = lomax_family();
  for (const double x : {0.1, 0.5, 2.0}) {
    for (const std::size_t n : {1u, 4u, 30u, 120u}) {
      const double z = fam.rate(1.7) * fam.transform(x);
      const double w2 = w_alpha_series(fam, 1.7, x, n, 2.0).value;
      const double w1 = w_alpha_series(fam, 1.7, x, n, 1.0).value;
      const double expect = w2 - 2.0 * std::exp(-z) * w1 + std::exp(-2.0 * z);
      CHECK_THAT(mse_cdf_hat_series(fam, 1.7, x, n).value, WithinAbs(expect, 1e-12));
      CHECK_THAT(expected_cdf_hat_series(fam, 1.7, x, n).value, WithinAbs(1.0 - w1, 1e-15));
    }
  }
}

TEST_CASE("MSE series worked values at size 200") {
  const auto e = exponential_family();
  CHECK_THAT(mse_cdf_hat_series(e, 1.0, 1.0, 200).value, WithinRel(0.000675778257593842, 1e-10));
  CHECK_THAT(mse_pdf_hat_series(e, 1.0, 1.0, 200).value, WithinRel(2.60729137367295e-6, 1e-8));
  CHECK(mse_pdf_hat_series(e, 1.0, 1.0, 400).value < mse_pdf_hat_series(e, 1.0, 1.0, 200).value);
  CHECK_THROWS_AS(mse_pdf_hat_series(e, 1.0, 1.0, 2), ArgumentError);
}

TEST_CASE("MSE[f_hat] series at size 3 and x = a") {
  // Only i = 0 survives in each sum: (B A')^2 [9 G(1)/G(3) - 2*3 G(2)/G(3) + 1].
  const auto w = weibull_family(1.0);
  const double ba = 2.0;
  const double expect = ba * ba * (9.0 / 2.0 - 6.0 / 2.0 + 1.0);
  CHECK_THAT(mse_pdf_hat_series(w, 2.0, 0.0, 3).value, WithinRel(expect, 1e-14));
}

TEST_CASE("the literal printed MSE forms disagree with the exact moment") {
  const auto e = exponential_family();
  const double exact_cdf = exact_mse_cdf_hat(e, 1.0, 1.0, 200).value;
  const double exact_pdf = exact_mse_pdf_hat(e, 1.0, 1.0, 200).value;
  CHECK_THAT(mse_cdf_hat_series(e, 1.0, 1.0, 200).value, WithinAbs(exact_cdf, 1e-10));
  CHECK_THAT(mse_pdf_hat_series(e, 1.0, 1.0, 200).value, WithinAbs(exact_pdf, 1e-10));
  const double printed_cdf = mse_cdf_hat_series(e, 1.0, 1.0, 200, MseForm::as_printed).value;
  const double printed_pdf = mse_pdf_hat_series(e, 1.0, 1.0, 200, MseForm::as_printed).value;
  CHECK(std::abs(printed_cdf - exact_cdf) > 0.1);
  CHECK(printed_cdf < 0.0);
  CHECK(std::abs(printed_pdf - exact_pdf) > 0.1);
}

TEST_CASE("asymptotic unbiasedness of the series at the median") {
  const std::vector<FamilySpec> fams{exponential_family(), lomax_family(), weibull_family(2.0),
                                     pareto_family(1.0)};
  for (const auto& fam : fams) {
    const double x = quantile(fam, 1.0, 0.5);
    const double F = cdf(fam, 1.0, x);
    const double f = pdf(fam, 1.0, x);
    double prev_c = 1e300;
    double prev_p = 1e300;
    for (const std::size_t n : {25u, 50u, 100u, 200u}) {
      const double bc = std::abs(expected_cdf_hat_series(fam, 1.0, x, n).value - F);
      const double bp = std::abs(expected_pdf_hat_series(fam, 1.0, x, n).value - f);
      INFO(fam.name << " n=" << n);
      CHECK(bc < prev_c);
      CHECK(bp < prev_p);
      prev_c = bc;
      prev_p = bp;
    }
    CHECK(prev_c < 1e-2);
    CHECK(prev_p < 1e-2);
  }
}

TEST_CASE("large sizes stay finite in log space") {
  const auto e = exponential_family();
  const auto t = gamma_ratio_series(500, 0, -500.0 * 2.0);
  CHECK(t.all_terms_finite);
  CHECK(t.terms == 500);
  CHECK(std::isfinite(t.value));
  for (const double x : {0.01, 0.5, 1.0}) {
    CHECK(std::isfinite(expected_cdf_hat_series(e, 1.0, x, 500).value));
    CHECK(std::isfinite(mse_cdf_hat_series(e, 1.0, x, 500).value));
    CHECK(std::isfinite(mse_pdf_hat_series(e, 1.0, x, 500).value));
  }
}

TEST_CASE("alpha(n) for the exponential family") {
  CHECK(alpha_n_exponential(2.0, 8) == 0.5);
  CHECK_THAT(alpha_n_exponential(1.0, 3), WithinRel(1.0 / 3.0, 1e-15));
  const double exact = exact_mse_theta_hat(exponential_family(), 1.3, 10).value;
  CHECK_THAT(alpha_n_exponential(1.3, 10), WithinRel(exact, 1e-8));
}

TEST_CASE("MSE of k^theta_hat series") {
  const double e = std::numbers::e;
  CHECK_THAT(mse_g_power_series(1.0, 1, e).value,
             WithinRel(1.0 - 2.0 * e + e * e, 1e-14));
  // Values printed in the CSV table for sizes 4..12.
  CHECK_THAT(mse_g_power_series(1.0, 4, e).value, WithinRel(1.0122095223765983, 1e-12));
  CHECK_THAT(mse_g_power_series(1.0, 7, e).value, WithinRel(20.384701854457138, 1e-12));
  CHECK_THAT(mse_g_power_series(1.0, 12, e).value, WithinRel(4.559324228676014, 1e-12));
  CHECK(mse_g_power_series(1.0, 12, e).regime == Regime::truncation_suspect);
  CHECK_THROWS_AS(mse_g_power_series(1.0, 5, 1.0), ArgumentError);
  CHECK_THROWS_AS(mse_g_power_series(1.0, 5, -2.0), ArgumentError);
  CHECK_THROWS_AS(mse_g_power_series(1.0, 0, 2.0), ArgumentError);
}

TEST_CASE("gamma_ratio matches the exact product") {
  for (const long long i : {0LL, 1LL, 2LL, 5LL}) {
    for (const long long n : {10LL, 100LL, 1000LL, 1000000LL}) {
      CHECK_THAT(gamma_ratio(i, n),
                 WithinRel(static_cast<double>(oracle::gamma_ratio_product(i, n)), 1e-11));
    }
  }
  double prev = 1e300;
  for (const long long n : {100LL, 1000LL, 10000LL, 1000000LL}) {
    const double gap = std::abs(gamma_ratio(2, n) - 1.0);
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(prev < 1e-3);
  CHECK_THROWS_AS(gamma_ratio(2, 4), ArgumentError);
}

TEST_CASE("series argument checks") {
  const auto e = exponential_family();
  CHECK_THROWS_AS(expected_cdf_hat_series(e, 1.0, 1.0, 0), ArgumentError);
  CHECK_THROWS_AS(mse_cdf_hat_series(e, 1.0, 1.0, 0), ArgumentError);
  CHECK_THROWS_AS(expected_cdf_hat_series(e, -1.0, 1.0, 5), DomainError);
}
