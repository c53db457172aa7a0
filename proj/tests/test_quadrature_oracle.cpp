#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "recmle/closedform.hpp"
#include "recmle/error.hpp"
#include "recmle/family.hpp"
#include "recmle/oracle.hpp"
#include "recmle/quadrature.hpp"
#include "recmle/rng.hpp"
#include "support/oracles.hpp"

using namespace recmle;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

// mpmath: 2 K_1(2)
constexpr double k2K1of2 = 0.279731763633044854569;

TEST_CASE("adaptive quadrature on known integrals") {
  const auto r1 = integrate_adaptive([](double x) { return x * x * x; }, 0.0, 2.0, 1e-12);
  CHECK(r1.converged);
  CHECK_THAT(r1.value, WithinRel(4.0, 1e-14));

  // Endpoint singularity in the derivative: reachable, but not at 1e-12.
  const auto r2 = integrate_adaptive([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-8);
  CHECK(r2.converged);
  CHECK_THAT(r2.value, WithinAbs(2.0 / 3.0, 1e-8));

  const auto r3 =
      integrate_adaptive([](double x) { return std::sin(50.0 * x); }, 0.0, std::numbers::pi, 1e-12);
  CHECK(r3.converged);
  CHECK_THAT(r3.value, WithinAbs(0.0, 1e-11));
}

TEST_CASE("quadrature reports non-convergence") {
  const auto nan_f = integrate_adaptive(
      [](double x) { return x > 0.5 ? std::numeric_limits<double>::quiet_NaN() : 1.0; }, 0.0,
      1.0, 1e-10);
  CHECK_FALSE(nan_f.converged);

  const auto singular = integrate_adaptive([](double x) { return 1.0 / x; }, 0.0, 1.0, 1e-10);
  CHECK_FALSE(singular.converged);
}

TEST_CASE("Gamma polynomial moments") {
  for (const double shape : {1.0, 2.0, 4.0, 7.0}) {
    for (const double rate : {0.25, 1.0, 3.0}) {
      for (int k = 0; k < 4; ++k) {
        const auto q = expect_over_gamma([k](double t) { return std::pow(t, k); }, shape, rate);
        const double exact = std::tgamma(shape + k) / std::tgamma(shape) / std::pow(rate, k);
        INFO("shape=" << shape << " rate=" << rate << " k=" << k);
        CHECK(q);
        CHECK_THAT(q.value, WithinAbs(exact, 1e-10 * std::max(1.0, exact)));
      }
    }
  }
}

TEST_CASE("E[exp(-1/T)] reproduces the Bessel identity") {
  CHECK_THAT(oracle::exp_inverse_expectation(1.0), WithinAbs(k2K1of2, 1e-14));
  const auto q = expect_over_gamma([](double t) { return std::exp(-1.0 / t); }, 1.0, 1.0);
  CHECK(q);
  CHECK_THAT(q.value, WithinAbs(k2K1of2, 1e-9));
  // size 1, exponential theta=1, x=1: E[F_hat] = 1 - 2 K_1(2).
  CHECK_THAT(exact_expected_cdf_hat(exponential_family(), 1.0, 1.0, 1).value,
             WithinAbs(1.0 - k2K1of2, 1e-9));
  for (const double c : {0.3, 2.0, 5.0}) {
    const auto qc = expect_over_gamma([c](double t) { return std::exp(-c / t); }, 1.0, 1.0);
    CHECK_THAT(qc.value, WithinAbs(oracle::exp_inverse_expectation(c), 1e-9));
  }
}

TEST_CASE("divergent expectations are flagged, not thrown") {
  // E[1/T] for T ~ Exp(1) is infinite.
  const auto q = expect_over_gamma([](double t) { return 1.0 / t; }, 1.0, 1.0);
  CHECK(q.divergent);
  CHECK_FALSE(static_cast<bool>(q));
  CHECK(exact_mse_g_hat(1.0, 10, std::numbers::e).divergent);
  CHECK_FALSE(exact_mse_g_hat(1.0, 10, 0.5).divergent);
}

TEST_CASE("exact moments against their closed forms") {
  const auto e = exponential_family();
  CHECK(exact_expected_cdf_hat(e, 1.0, 0.0, 5).value == 0.0);
  CHECK_THAT(exact_expected_cdf_hat(e, 1.0, 1.0, 200).value,
             WithinAbs(expected_cdf_hat_series(e, 1.0, 1.0, 200).value, 1e-9));
  CHECK_THAT(exact_mse_cdf_hat(e, 1.0, 1.0, 200).value,
             WithinAbs(mse_cdf_hat_series(e, 1.0, 1.0, 200).value, 1e-9));
  CHECK_THAT(exact_expected_pdf_hat(e, 1.0, 1.0, 30).value,
             WithinRel(expected_pdf_hat_series(e, 1.0, 1.0, 30).value, 1e-8));
  CHECK_THAT(exact_mse_pdf_hat(e, 1.0, 1.0, 200).value,
             WithinAbs(mse_pdf_hat_series(e, 1.0, 1.0, 200).value, 1e-9));
  for (const std::size_t n : {2u, 5u, 40u}) {
    CHECK_THAT(exact_mse_theta_hat(e, 2.0, n).value, WithinRel(4.0 / n, 1e-8));
  }
}

TEST_CASE("exact moments stay in their natural ranges where the series does not") {
  const auto e = exponential_family();
  const auto q = exact_expected_cdf_hat(e, 1.0, 0.8, 2);
  CHECK_THAT(q.value, WithinRel(0.627277469612103, 1e-9));
  for (const double x : {0.01, 0.5, 1.0, 3.0, 10.0}) {
    for (const std::size_t n : {1u, 2u, 3u, 10u}) {
      const double v = exact_expected_cdf_hat(e, 1.0, x, n).value;
      CHECK(v > 0.0);
      CHECK(v < 1.0);
      CHECK(exact_mse_cdf_hat(e, 1.0, x, n).value >= 0.0);
    }
  }
}

TEST_CASE("k-power MSE in the convergent regime") {
  // With n = 1 and theta = 1, k^{theta_hat} = exp(-c / T) for T ~ Exp(1).
  const double k = 0.5;
  const double c = -std::log(k);  // k^{1/T} = exp(-c/T)
  const double e1 = oracle::exp_inverse_expectation(c);
  const double e2 = oracle::exp_inverse_expectation(2.0 * c);
  const double expect = e2 - 2.0 * k * e1 + k * k;
  CHECK_THAT(exact_mse_g_hat(1.0, 1, k).value, WithinAbs(expect, 1e-9));
}

TEST_CASE("two-sample KS statistic") {
  const std::vector<double> a{1, 2, 3, 4};
  const std::vector<double> b{5, 6, 7};
  CHECK(ks_two_sample(a, b) == 1.0);
  CHECK(ks_two_sample(a, a) == 0.0);
  const std::vector<double> c{1, 2, 2, 3};
  const std::vector<double> d{2, 2, 2, 2};
  CHECK(ks_two_sample(c, d) == 0.25);
  const std::vector<double> x{0.1, 0.4, 0.7};
  const std::vector<double> y{0.2, 0.3, 0.5, 0.9};
  CHECK_THAT(ks_two_sample(x, y), WithinAbs(1.0 / 3.0, 1e-15));
  CHECK_THROWS_AS(ks_two_sample(std::vector<double>{}, a), ArgumentError);
  CHECK_THROWS_AS(ks_two_sample(std::vector<double>{std::nan("")}, a), ArgumentError);
}

TEST_CASE("KS is symmetric and invariant under monotone transforms") {
  RngStream rng(6, 6);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a(1 + rng.next_u64() % 40);
    std::vector<double> b(1 + rng.next_u64() % 40);
    for (auto& v : a) {
      v = std::floor(rng.uniform() * 20.0);
    }
    for (auto& v : b) {
      v = std::floor(rng.uniform() * 20.0) + 0.5 * (trial % 2);
    }
    const double d = ks_two_sample(a, b);
    REQUIRE(ks_two_sample(b, a) == d);
    std::vector<double> ta;
    std::vector<double> tb;
    for (const double v : a) {
      ta.push_back(std::exp(0.1 * v) - 3.0);
    }
    for (const double v : b) {
      tb.push_back(std::exp(0.1 * v) - 3.0);
    }
    REQUIRE(ks_two_sample(ta, tb) == d);
  }
}
