#pragma once

// Ground truth for the moment formulas. Both the sample statistic sum A(X_i)
// and the record statistic A(R_m) are Gamma(size, 1/B(theta)), so every
// expectation of a plug-in estimator is a one-dimensional integral against
// that law, evaluated here by adaptive quadrature rather than by the
// truncated series of closedform.hpp.

#include <cstddef>
#include <functional>
#include <span>

#include "recmle/family.hpp"

namespace recmle {

struct GammaExpectation {
  double value = 0.0;
  double error_bound = 0.0;
  bool divergent = false;      // refinement failed to converge
  double previous_sum = 0.0;   // panel total one refinement step earlier

  explicit operator bool() const { return !divergent; }
};

inline constexpr double kDefaultQuadTol = 1e-10;

// E[h(T)] for T ~ Gamma(shape, scale 1/rate). Integrates over s in (0, 1)
// with t = mean * s / (1 - s), mean = shape / rate. A divergent integral is
// reported through `divergent`, never thrown.
GammaExpectation expect_over_gamma(const std::function<double(double)>& h, double shape,
                                   double rate, double tol = kDefaultQuadTol);

// E[F_hat(x)] = 1 - E[exp(-size A(x) / T)].
GammaExpectation exact_expected_cdf_hat(const FamilySpec& spec, double theta, double x,
                                        std::size_t size, double tol = kDefaultQuadTol);

// E[f_hat(x)] = E[size A'(x) / T exp(-size A(x) / T)].
GammaExpectation exact_expected_pdf_hat(const FamilySpec& spec, double theta, double x,
                                        std::size_t size, double tol = kDefaultQuadTol);

// E[(F_hat(x) - F(x))^2], integrated as a single nonnegative integrand.
GammaExpectation exact_mse_cdf_hat(const FamilySpec& spec, double theta, double x,
                                   std::size_t size, double tol = kDefaultQuadTol);

// E[(f_hat(x) - f(x))^2]. Diverges at x = a when size <= 2.
GammaExpectation exact_mse_pdf_hat(const FamilySpec& spec, double theta, double x,
                                   std::size_t size, double tol = kDefaultQuadTol);

// E[(B^-1(size / T) - theta)^2].
GammaExpectation exact_mse_theta_hat(const FamilySpec& spec, double theta, std::size_t size,
                                     double tol = kDefaultQuadTol);

// E[(k^{theta_hat} - k^theta)^2] for a family with B(theta) = theta, so that
// theta_hat = size / T. Divergent for k > 1.
GammaExpectation exact_mse_g_hat(double theta, std::size_t size, double k,
                                 double tol = kDefaultQuadTol);

// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

}  // namespace recmle
