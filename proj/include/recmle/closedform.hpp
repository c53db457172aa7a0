#pragma once

// Closed-form expectation and MSE series for the plug-in estimators.
//
// Every series here comes from expanding exp(-c/T) in powers of 1/T and
// integrating term by term against T ~ Gamma(size, 1/B(theta)). Terms whose
// integral diverges (power of 1/T >= size) are dropped, so the truncated sums
// agree with the true moments only as size grows. Values are reported as
// computed; `in_natural_bounds` and `regime` flag results that cannot be the
// moment they claim to be (for example an expected CDF above 1).

#include <cstddef>
#include <cstdint>

#include "recmle/family.hpp"

namespace recmle {

enum class Regime { asymptotic_ok, truncation_suspect };

const char* to_string(Regime r);

struct SeriesValue {
  double value = 0.0;
  std::size_t terms_used = 0;  // summands in the longest truncated sum
  bool in_natural_bounds = true;
  Regime regime = Regime::asymptotic_ok;
};

// Which algebraic form of the MSE series to evaluate. `proof` assembles the
// MSE as E[est^2] - 2 truth E[est] + truth^2. `as_printed` reproduces the
// displayed theorem statement literally: the final truth^2 term is subtracted,
// and for the density the leading sum lacks its size^2 factor and the cross
// term carries A'(x) instead of A'(x)^2.
enum class MseForm { proof, as_printed };

// sum_{i=0}^{last} y^i Gamma(shape - i - offset) / (Gamma(shape) Gamma(i + 1))
// with last = shape - offset - 1, evaluated per term in log space and summed
// with compensation. Throws ArgumentError when the sum would be empty.
struct TruncatedSum {
  double value = 0.0;
  std::size_t terms = 0;
  bool all_terms_finite = true;
};
TruncatedSum gamma_ratio_series(std::size_t shape, std::size_t offset, double y);

// 1 - sum_{i=0}^{size-1} Gamma(size-i)/(Gamma(size)Gamma(i+1)) (-size B A)^i
SeriesValue expected_cdf_hat_series(const FamilySpec& spec, double theta, double x,
                                    std::size_t size);

// sum_{i=0}^{size-2} Gamma(size-i-1)/(Gamma(size)Gamma(i+1)) (-1)^i
//   (size B)^{i+1} A'(x) A(x)^i;  requires size >= 2.
SeriesValue expected_pdf_hat_series(const FamilySpec& spec, double theta, double x,
                                    std::size_t size);

// W(alpha) = sum_{i=0}^{m-1} (-alpha m B A)^i Gamma(m-i)/(Gamma(i+1)Gamma(m)),
// the truncated stand-in for E[exp(-alpha m A(x) / T)].
SeriesValue w_alpha_series(const FamilySpec& spec, double theta, double x, std::size_t m,
                           double alpha);

SeriesValue mse_cdf_hat_series(const FamilySpec& spec, double theta, double x, std::size_t size,
                               MseForm form = MseForm::proof);

// Requires size >= 3.
SeriesValue mse_pdf_hat_series(const FamilySpec& spec, double theta, double x, std::size_t size,
                               MseForm form = MseForm::proof);

// MSE of theta_hat for B(theta) = 1/theta: theta^2 / n.
double alpha_n_exponential(double theta, std::size_t n);

// MSE of k^theta_hat for B(theta) = theta, where theta_hat = n/T:
//   E2 - 2 k^theta E1 + k^{2 theta},
//   E_alpha = sum_{i=0}^{n-1} (alpha n theta ln k)^i Gamma(n-i)/(i! Gamma(n)).
// For k > 1 the exact moment is infinite, so the result is always marked
// truncation_suspect.
SeriesValue mse_g_power_series(double theta, std::size_t n, double k);

// Gamma(n-i-1) n^{i+1} / Gamma(n); requires n > i + 2. Tends to 1 as n grows.
double gamma_ratio(std::int64_t i, std::int64_t n);

}  // namespace recmle
