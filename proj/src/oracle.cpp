#include "recmle/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "recmle/error.hpp"
#include "recmle/quadrature.hpp"

namespace recmle {

GammaExpectation expect_over_gamma(const std::function<double(double)>& h, double shape,
                                   double rate, double tol) {
  if (!(shape > 0.0) || !(rate > 0.0) || !std::isfinite(shape) || !std::isfinite(rate)) {
    throw ArgumentError("expect_over_gamma: shape and rate must be positive and finite");
  }
  if (!(tol > 0.0)) {
    throw ArgumentError("expect_over_gamma: tolerance must be > 0");
  }
  const double mean = shape / rate;
  const double log_norm = shape * std::log(rate) - std::lgamma(shape) + std::log(mean);

  auto integrand = [&](double s) -> double {
    if (s <= 0.0 || s >= 1.0) {
      return 0.0;
    }
    const double t = mean * s / (1.0 - s);
    if (!(t > 0.0) || !std::isfinite(t)) {
      return 0.0;
    }
    const double log_weight =
        (shape - 1.0) * std::log(t) + log_norm - rate * t - 2.0 * std::log1p(-s);
    if (log_weight < -745.0) {
      return 0.0;
    }
    return h(t) * std::exp(log_weight);
  };

  const auto q = integrate_adaptive(integrand, 0.0, 1.0, tol);
  GammaExpectation out;
  out.value = q.value;
  out.error_bound = q.error;
  out.divergent = !q.converged;
  out.previous_sum = q.previous_value;
  return out;
}

namespace {

struct Evaluation {
  double rate;
  double level;       // A(x)
  double derivative;  // A'(x)
};

Evaluation evaluate(const FamilySpec& spec, double theta, double x) {
  require_theta(spec, theta);
  if (std::isnan(x)) {
    throw DomainError("x is NaN");
  }
  Evaluation e;
  e.rate = spec.rate(theta);
  e.level = x <= spec.support_lo ? 0.0 : spec.transform(x);
  e.derivative = (x < spec.support_lo || x >= spec.support_hi) ? 0.0 : spec.transform_derivative(x);
  return e;
}

void require_size(std::size_t size) {
  if (size == 0) {
    throw ArgumentError("size must be >= 1");
  }
}

}  // namespace

GammaExpectation exact_expected_cdf_hat(const FamilySpec& spec, double theta, double x,
                                        std::size_t size, double tol) {
  require_size(size);
  const auto e = evaluate(spec, theta, x);
  if (x >= spec.support_hi) {
    return {1.0, 0.0, false, 1.0};
  }
  if (e.level == 0.0) {
    return {0.0, 0.0, false, 0.0};
  }
  const double c = static_cast<double>(size) * e.level;
  auto r = expect_over_gamma([c](double t) { return std::exp(-c / t); },
                             static_cast<double>(size), e.rate, tol);
  r.value = 1.0 - r.value;
  r.previous_sum = 1.0 - r.previous_sum;
  return r;
}

GammaExpectation exact_expected_pdf_hat(const FamilySpec& spec, double theta, double x,
                                        std::size_t size, double tol) {
  require_size(size);
  const auto e = evaluate(spec, theta, x);
  const double n = static_cast<double>(size);
  const double c = n * e.level;
  const double d = n * e.derivative;
  return expect_over_gamma([c, d](double t) { return d / t * std::exp(-c / t); }, n, e.rate, tol);
}

GammaExpectation exact_mse_cdf_hat(const FamilySpec& spec, double theta, double x,
                                   std::size_t size, double tol) {
  require_size(size);
  const auto e = evaluate(spec, theta, x);
  if (e.level == 0.0 || x >= spec.support_hi) {
    return {0.0, 0.0, false, 0.0};
  }
  const double c = static_cast<double>(size) * e.level;
  const double truth = std::exp(-e.rate * e.level);  // 1 - F(x)
  return expect_over_gamma(
      [c, truth](double t) {
        const double diff = std::exp(-c / t) - truth;
        return diff * diff;
      },
      static_cast<double>(size), e.rate, tol);
}

GammaExpectation exact_mse_pdf_hat(const FamilySpec& spec, double theta, double x,
                                   std::size_t size, double tol) {
  require_size(size);
  const auto e = evaluate(spec, theta, x);
  const double n = static_cast<double>(size);
  const double c = n * e.level;
  const double d = n * e.derivative;
  const double truth = e.derivative * e.rate * std::exp(-e.rate * e.level);
  return expect_over_gamma(
      [c, d, truth](double t) {
        const double diff = d / t * std::exp(-c / t) - truth;
        return diff * diff;
      },
      n, e.rate, tol);
}

GammaExpectation exact_mse_theta_hat(const FamilySpec& spec, double theta, std::size_t size,
                                     double tol) {
  require_size(size);
  require_theta(spec, theta);
  const double n = static_cast<double>(size);
  return expect_over_gamma(
      [&spec, n, theta](double t) {
        const double diff = rate_inverse(spec, n / t) - theta;
        return diff * diff;
      },
      n, spec.rate(theta), tol);
}

GammaExpectation exact_mse_g_hat(double theta, std::size_t size, double k, double tol) {
  require_size(size);
  if (!(theta > 0.0)) {
    throw DomainError("exact_mse_g_hat: theta must be > 0");
  }
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw ArgumentError("exact_mse_g_hat: k must be positive and finite");
  }
  const double n = static_cast<double>(size);
  const double log_k = std::log(k);
  const double truth = std::pow(k, theta);
  return expect_over_gamma(
      [n, log_k, truth](double t) {
        const double diff = std::exp(n * log_k / t) - truth;
        return diff * diff;
      },
      n, theta, tol);
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) {
    throw ArgumentError("ks_two_sample: both samples must be nonempty");
  }
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  auto is_nan = [](double v) { return std::isnan(v); };
  if (std::any_of(sa.begin(), sa.end(), is_nan) || std::any_of(sb.begin(), sb.end(), is_nan)) {
    throw ArgumentError("ks_two_sample: NaN in input");
  }
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double v = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] == v) {
      ++i;
    }
    while (j < sb.size() && sb[j] == v) {
      ++j;
    }
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

}  // namespace recmle
