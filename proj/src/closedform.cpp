#include "recmle/closedform.hpp"

#include <cmath>
#include <string>

#include "recmle/error.hpp"
#include "recmle/summation.hpp"

namespace recmle {

const char* to_string(Regime r) {
  return r == Regime::asymptotic_ok ? "asymptotic_ok" : "truncation_suspect";
}

TruncatedSum gamma_ratio_series(std::size_t shape, std::size_t offset, double y) {
  if (shape <= offset) {
    throw ArgumentError("truncated series is empty: size " + std::to_string(shape) +
                        " must exceed " + std::to_string(offset));
  }
  const std::size_t terms = shape - offset;
  // Log-magnitudes by the term-ratio recurrence
  //   t_{i+1} / t_i = |y| / ((i + 1) (shape - offset - 1 - i)),
  // carried in long double.
  long double log_mag = 0.0L;
  for (std::size_t j = 1; j <= offset; ++j) {
    log_mag -= std::log(static_cast<long double>(shape - j));
  }
  const long double log_abs_y = std::log(std::abs(static_cast<long double>(y)));
  const bool negative = y < 0.0;

  TruncatedSum out;
  out.terms = terms;
  CompensatedSum sum;
  for (std::size_t i = 0; i < terms; ++i) {
    if (i > 0) {
      log_mag += log_abs_y - std::log(static_cast<long double>(i)) -
                 std::log(static_cast<long double>(terms - i));
    }
    if (std::isnan(log_mag) || log_mag == std::numeric_limits<long double>::infinity()) {
      out.all_terms_finite = false;
    }
    const double mag = static_cast<double>(std::exp(log_mag));
    if (std::isinf(mag)) {
      out.all_terms_finite = false;
    }
    sum.add(negative && (i % 2 == 1) ? -mag : mag);
  }
  out.value = sum.value();
  return out;
}

namespace {

struct Point {
  double rate;        // B(theta)
  double level;       // A(x)
  double derivative;  // A'(x)
};

Point evaluate_point(const FamilySpec& spec, double theta, double x) {
  require_theta(spec, theta);
  if (std::isnan(x)) {
    throw DomainError("series: x is NaN");
  }
  if (x < spec.support_lo || x >= spec.support_hi) {
    throw DomainError("series: x lies outside the support of " + spec.name);
  }
  Point p;
  p.rate = spec.rate(theta);
  p.level = x == spec.support_lo ? 0.0 : spec.transform(x);
  p.derivative = spec.transform_derivative(x);
  return p;
}

void require_size(std::size_t size, std::size_t minimum, const char* what) {
  if (size < minimum) {
    throw ArgumentError(std::string(what) + ": size must be >= " + std::to_string(minimum) +
                        " (the truncated sum is empty below that)");
  }
}

SeriesValue finish(double value, std::size_t terms, bool in_bounds, bool large_argument,
                   bool finite_terms) {
  if (!finite_terms || !std::isfinite(value)) {
    throw ArgumentError("series evaluation produced a non-finite term");
  }
  SeriesValue s;
  s.value = value;
  s.terms_used = terms;
  s.in_natural_bounds = in_bounds;
  s.regime = (large_argument || !in_bounds) ? Regime::truncation_suspect : Regime::asymptotic_ok;
  return s;
}

// size * B * A > size / 2
bool large_argument(const Point& p) { return p.rate * p.level > 0.5; }

}  // namespace

SeriesValue w_alpha_series(const FamilySpec& spec, double theta, double x, std::size_t m,
                           double alpha) {
  require_size(m, 1, "w_alpha_series");
  if (!(alpha >= 0.0)) {
    throw ArgumentError("w_alpha_series: alpha must be >= 0");
  }
  const Point p = evaluate_point(spec, theta, x);
  const double y = -alpha * static_cast<double>(m) * p.rate * p.level;
  const auto s = gamma_ratio_series(m, 0, y);
  return finish(s.value, s.terms, s.value >= 0.0 && s.value <= 1.0, large_argument(p),
                s.all_terms_finite);
}

SeriesValue expected_cdf_hat_series(const FamilySpec& spec, double theta, double x,
                                    std::size_t size) {
  require_size(size, 1, "expected_cdf_hat_series");
  const Point p = evaluate_point(spec, theta, x);
  const double y = -static_cast<double>(size) * p.rate * p.level;
  const auto s = gamma_ratio_series(size, 0, y);
  const double v = 1.0 - s.value;
  return finish(v, s.terms, v >= 0.0 && v <= 1.0, large_argument(p), s.all_terms_finite);
}

SeriesValue expected_pdf_hat_series(const FamilySpec& spec, double theta, double x,
                                    std::size_t size) {
  require_size(size, 2, "expected_pdf_hat_series");
  const Point p = evaluate_point(spec, theta, x);
  const double n = static_cast<double>(size);
  const auto s = gamma_ratio_series(size, 1, -n * p.rate * p.level);
  const double v = n * p.rate * p.derivative * s.value;
  return finish(v, s.terms, v >= 0.0, large_argument(p), s.all_terms_finite);
}

SeriesValue mse_cdf_hat_series(const FamilySpec& spec, double theta, double x, std::size_t size,
                               MseForm form) {
  require_size(size, 1, "mse_cdf_hat_series");
  const Point p = evaluate_point(spec, theta, x);
  const double n = static_cast<double>(size);
  const double z = p.rate * p.level;
  const auto w2 = gamma_ratio_series(size, 0, -2.0 * n * z);
  const auto w1 = gamma_ratio_series(size, 0, -n * z);
  const double truth_sq = std::exp(-2.0 * z);
  const double last = form == MseForm::proof ? truth_sq : -truth_sq;
  const double v = w2.value - 2.0 * std::exp(-z) * w1.value + last;
  return finish(v, w2.terms, v >= 0.0 && v <= 1.0, large_argument(p),
                w1.all_terms_finite && w2.all_terms_finite);
}

SeriesValue mse_pdf_hat_series(const FamilySpec& spec, double theta, double x, std::size_t size,
                               MseForm form) {
  require_size(size, 3, "mse_pdf_hat_series");
  const Point p = evaluate_point(spec, theta, x);
  const double n = static_cast<double>(size);
  const double z = p.rate * p.level;
  const double bd = p.rate * p.derivative;  // B A'
  const auto second = gamma_ratio_series(size, 2, -2.0 * n * z);
  const auto first = gamma_ratio_series(size, 1, -n * z);
  const double truth_sq = bd * bd * std::exp(-2.0 * z);

  double v = 0.0;
  if (form == MseForm::proof) {
    v = n * n * bd * bd * second.value -
        2.0 * n * p.derivative * bd * p.rate * std::exp(-z) * first.value + truth_sq;
  } else {
    v = bd * bd * second.value - 2.0 * n * p.derivative * p.rate * p.rate * std::exp(-z) * first.value -
        truth_sq;
  }
  return finish(v, first.terms, v >= 0.0, large_argument(p),
                first.all_terms_finite && second.all_terms_finite);
}

double alpha_n_exponential(double theta, std::size_t n) {
  if (n == 0) {
    throw ArgumentError("alpha_n_exponential: n must be >= 1");
  }
  if (!(theta > 0.0)) {
    throw ArgumentError("alpha_n_exponential: theta must be > 0");
  }
  return theta * theta / static_cast<double>(n);
}

SeriesValue mse_g_power_series(double theta, std::size_t n, double k) {
  if (n == 0) {
    throw ArgumentError("mse_g_power_series: n must be >= 1");
  }
  if (!(k > 0.0) || k == 1.0 || !std::isfinite(k)) {
    throw ArgumentError("mse_g_power_series: k must be positive, finite and different from 1");
  }
  if (!(theta > 0.0)) {
    throw DomainError("mse_g_power_series: theta must be > 0");
  }
  const double c = static_cast<double>(n) * theta * std::log(k);
  const auto e2 = gamma_ratio_series(n, 0, 2.0 * c);
  const auto e1 = gamma_ratio_series(n, 0, c);
  const double g = std::pow(k, theta);
  const double v = e2.value - 2.0 * g * e1.value + g * g;
  const bool suspect = k > 1.0 || theta * std::abs(std::log(k)) > 0.5;
  return finish(v, e2.terms, v >= 0.0, suspect, e1.all_terms_finite && e2.all_terms_finite);
}

double gamma_ratio(std::int64_t i, std::int64_t n) {
  if (i < 0) {
    throw ArgumentError("gamma_ratio: i must be >= 0");
  }
  if (n <= i + 2) {
    throw ArgumentError("gamma_ratio: n must exceed i + 2");
  }
  // n^(i+1) / ((n-1)(n-2)...(n-i-1)) = exp(-sum_j log1p(-j/n))
  const double dn = static_cast<double>(n);
  CompensatedSum log_r;
  for (std::int64_t j = 1; j <= i + 1; ++j) {
    log_r.add(-std::log1p(-static_cast<double>(j) / dn));
  }
  return std::exp(log_r.value());
}

}  // namespace recmle
