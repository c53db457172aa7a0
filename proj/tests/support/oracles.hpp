#pragma once

// Slow, obviously-correct reference implementations. Nothing here calls the
// library code it is used to check.

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace oracle {

// Index i is a record iff xs[i] exceeds every earlier element.
inline std::vector<std::size_t> brute_force_record_indices(const std::vector<double>& xs) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    bool record = true;
    for (std::size_t j = 0; j < i; ++j) {
      if (!(xs[i] > xs[j])) {
        record = false;
        break;
      }
    }
    if (record) {
      out.push_back(i);
    }
  }
  return out;
}

// Maximizer of a unimodal f on [lo, hi].
inline long double golden_section_max(const std::function<long double(long double)>& f,
                                      long double lo, long double hi, long double tol = 1e-12L) {
  const long double g = (std::sqrt(5.0L) - 1.0L) / 2.0L;
  long double c = hi - g * (hi - lo);
  long double d = lo + g * (hi - lo);
  long double fc = f(c);
  long double fd = f(d);
  while (hi - lo > tol * (1.0 + std::abs(lo) + std::abs(hi))) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - g * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + g * (hi - lo);
      fd = f(d);
    }
  }
  return 0.5L * (lo + hi);
}

// sum_{i=0}^{shape-offset-1} y^i Gamma(shape-i-offset) / (Gamma(shape) i!),
// term by term in long double with tgammal.
inline long double gamma_series(std::size_t shape, std::size_t offset, long double y) {
  long double sum = 0.0L;
  for (std::size_t i = 0; i + offset < shape; ++i) {
    sum += std::pow(y, static_cast<long double>(i)) *
           std::tgamma(static_cast<long double>(shape - i - offset)) /
           (std::tgamma(static_cast<long double>(shape)) *
            std::tgamma(static_cast<long double>(i + 1)));
  }
  return sum;
}

// Gamma(n-i-1) n^(i+1) / Gamma(n) = n^(i+1) / ((n-1)(n-2)...(n-i-1)).
inline long double gamma_ratio_product(long long i, long long n) {
  long double r = 1.0L;
  for (long long j = 1; j <= i + 1; ++j) {
    r *= static_cast<long double>(n) / static_cast<long double>(n - j);
  }
  return r;
}

// 2 sqrt(c) K_1(2 sqrt(c)) = int_0^inf exp(-c/t - t) dt, via the substitution
// t = sqrt(c) e^u, which turns it into 2 sqrt(c) int_0^inf exp(-2 sqrt(c) cosh u) cosh u du.
// Midpoint rule on the symmetric form, which converges geometrically here.
inline double exp_inverse_expectation(double c) {
  const long double z = 2.0L * std::sqrt(static_cast<long double>(c));
  const long double h = 1.0L / 512.0L;
  long double sum = 0.0L;
  for (long double u = -8.0L + h / 2; u < 8.0L; u += h) {
    sum += std::exp(-z * std::cosh(u)) * std::cosh(u);
  }
  return static_cast<double>(0.5L * z * h * sum);
}

}  // namespace oracle
