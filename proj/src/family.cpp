#include "recmle/family.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "recmle/error.hpp"
#include "recmle/format.hpp"

namespace recmle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRootTol = 1e-12;
constexpr int kMaxBisection = 4000;

bool finite(double v) { return std::isfinite(v); }

// Bisection for an increasing function g on [lo, hi] with g(lo) <= 0 <= g(hi).
template <typename G>
double bisect(G&& g, double lo, double hi) {
  for (int it = 0; it < kMaxBisection; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= kRootTol * std::max(std::abs(lo), std::abs(hi)) || mid <= lo || mid >= hi) {
      return mid;
    }
    if (g(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> log_spaced(double lo_exp, double hi_exp, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    out[i] = std::pow(10.0, lo_exp + (hi_exp - lo_exp) * t);
  }
  return out;
}

// Grid over an interval that may be open or unbounded at either end.
std::vector<double> interior_grid(double lo, double hi, std::size_t n, double span_exp) {
  std::vector<double> out;
  out.reserve(n);
  if (finite(lo) && finite(hi)) {
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back(lo + (hi - lo) * static_cast<double>(i + 1) / static_cast<double>(n + 1));
    }
  } else if (finite(lo)) {
    for (double d : log_spaced(-span_exp, span_exp, n)) {
      out.push_back(lo + d);
    }
  } else if (finite(hi)) {
    auto d = log_spaced(-span_exp, span_exp, n);
    std::reverse(d.begin(), d.end());
    for (double v : d) {
      out.push_back(hi - v);
    }
  } else {
    const double w = std::pow(10.0, span_exp);
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back(-w + 2.0 * w * static_cast<double>(i) / static_cast<double>(n - 1));
    }
  }
  return out;
}

std::string describe(double v) { return format_double(v); }

}  // namespace

// ---------------------------------------------------------------- builtins

FamilySpec exponential_family() {
  FamilySpec f;
  f.name = "exponential";
  f.transform = [](double x) { return x; };
  f.transform_derivative = [](double) { return 1.0; };
  f.transform_inverse = [](double y) { return y; };
  f.rate = [](double theta) { return 1.0 / theta; };
  f.rate_inverse = [](double y) { return 1.0 / y; };
  f.support_lo = 0.0;
  f.support_hi = kInf;
  f.theta_domain = {0.0, kInf};
  f.rate_map = RateMap::reciprocal;
  return f;
}

FamilySpec lomax_family() {
  FamilySpec f;
  f.name = "lomax";
  f.transform = [](double x) { return std::log1p(x); };
  f.transform_derivative = [](double x) { return 1.0 / (1.0 + x); };
  f.transform_inverse = [](double y) { return std::expm1(y); };
  f.rate = [](double theta) { return 1.0 / theta; };
  f.rate_inverse = [](double y) { return 1.0 / y; };
  f.support_lo = 0.0;
  f.support_hi = kInf;
  f.theta_domain = {0.0, kInf};
  f.rate_map = RateMap::reciprocal;
  return f;
}

FamilySpec weibull_family(double alpha) {
  if (!(alpha > 0.0) || !finite(alpha)) {
    throw ArgumentError("weibull: alpha must be a positive finite real, got " + describe(alpha));
  }
  FamilySpec f;
  f.name = "weibull:alpha=" + format_double(alpha);
  f.transform = [alpha](double x) { return std::pow(x, alpha); };
  f.transform_derivative = [alpha](double x) { return alpha * std::pow(x, alpha - 1.0); };
  f.transform_inverse = [alpha](double y) { return std::pow(y, 1.0 / alpha); };
  f.rate = [](double theta) { return theta; };
  f.rate_inverse = [](double y) { return y; };
  f.support_lo = 0.0;
  f.support_hi = kInf;
  f.theta_domain = {0.0, kInf};
  f.rate_map = RateMap::identity;
  return f;
}

FamilySpec pareto_family(double k) {
  if (!(k > 0.0) || !finite(k)) {
    throw ArgumentError("pareto: k must be a positive finite real, got " + describe(k));
  }
  FamilySpec f;
  f.name = "pareto:k=" + format_double(k);
  f.transform = [k](double x) { return std::log(x / k); };
  f.transform_derivative = [](double x) { return 1.0 / x; };
  f.transform_inverse = [k](double y) { return k * std::exp(y); };
  f.rate = [](double theta) { return theta; };
  f.rate_inverse = [](double y) { return y; };
  f.support_lo = k;
  f.support_hi = kInf;
  f.theta_domain = {0.0, kInf};
  f.rate_map = RateMap::identity;
  return f;
}

FamilySpec make_family(const BuiltinFamily& builtin) {
  switch (builtin.kind) {
    case BuiltinKind::exponential:
      return exponential_family();
    case BuiltinKind::lomax:
      return lomax_family();
    case BuiltinKind::weibull:
      return weibull_family(builtin.weibull_alpha);
    case BuiltinKind::pareto:
      return pareto_family(builtin.pareto_k);
  }
  throw ArgumentError("unknown builtin family");
}

// ---------------------------------------------------------------- inverses

double transform_inverse(const FamilySpec& spec, double y) {
  if (std::isnan(y) || y < 0.0) {
    throw DomainError("transform inverse: argument must be >= 0, got " + describe(y));
  }
  if (spec.transform_inverse) {
    return spec.transform_inverse(y);
  }
  const double a = spec.support_lo;
  const double b = spec.support_hi;
  auto g = [&](double x) { return spec.transform(x) - y; };

  double lo = finite(a) ? a : -1.0;
  while (!finite(a) && g(lo) > 0.0) {
    lo = -2.0 * std::abs(lo) - 1.0;
    if (!finite(lo)) {
      throw RangeError("transform inverse: cannot bracket y=" + describe(y));
    }
  }
  if (y == 0.0 && finite(a)) {
    return a;
  }
  double hi = finite(b) ? b : lo + 1.0;
  while (!finite(b) && !(g(hi) >= 0.0)) {
    hi = lo + 2.0 * (hi - lo);
    if (!finite(hi)) {
      throw RangeError("transform inverse: cannot bracket y=" + describe(y));
    }
  }
  return bisect(g, lo, hi);
}

double rate_inverse(const FamilySpec& spec, double y) {
  if (spec.rate_inverse) {
    const double theta = spec.rate_inverse(y);
    if (!spec.theta_domain.contains(theta)) {
      throw RangeError("rate inverse: B^-1(" + describe(y) + ") = " + describe(theta) +
                       " lies outside the parameter domain of " + spec.name);
    }
    return theta;
  }

  // Seed a bracket from a wide grid over the parameter domain.
  const Interval dom = spec.theta_domain;
  std::vector<double> grid;
  if (finite(dom.lo) && finite(dom.hi)) {
    grid = interior_grid(dom.lo, dom.hi, 257, 0.0);
  } else {
    grid = interior_grid(dom.lo, dom.hi, 257, 8.0);
  }
  double bmin = kInf;
  double bmax = -kInf;
  std::vector<double> vals(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    vals[i] = spec.rate(grid[i]);
    if (finite(vals[i])) {
      bmin = std::min(bmin, vals[i]);
      bmax = std::max(bmax, vals[i]);
    }
  }
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double v0 = vals[i] - y;
    const double v1 = vals[i + 1] - y;
    if (!finite(v0) || !finite(v1)) {
      continue;
    }
    if (v0 == 0.0) {
      return grid[i];
    }
    if ((v0 < 0.0) != (v1 < 0.0) || v1 == 0.0) {
      const double sign = v0 < 0.0 ? 1.0 : -1.0;
      return bisect([&](double t) { return sign * (spec.rate(t) - y); }, grid[i], grid[i + 1]);
    }
  }
  std::ostringstream msg;
  msg << "rate inverse: n/T = " << describe(y) << " is outside the range of B on the domain grid ["
      << describe(bmin) << ", " << describe(bmax) << "] for " << spec.name;
  throw RangeError(msg.str());
}

// ---------------------------------------------------------------- law

void require_theta(const FamilySpec& spec, double theta) {
  if (!spec.theta_domain.contains(theta)) {
    throw DomainError("theta = " + describe(theta) + " is outside the parameter domain of " +
                      spec.name);
  }
}

bool in_support(const FamilySpec& spec, double x) {
  return x >= spec.support_lo && x < spec.support_hi;
}

double cdf(const FamilySpec& spec, double theta, double x) {
  require_theta(spec, theta);
  if (std::isnan(x)) {
    throw DomainError("cdf: x is NaN");
  }
  if (x <= spec.support_lo) {
    return 0.0;
  }
  if (x >= spec.support_hi) {
    return 1.0;
  }
  return -std::expm1(-spec.rate(theta) * spec.transform(x));
}

double pdf(const FamilySpec& spec, double theta, double x) {
  require_theta(spec, theta);
  if (std::isnan(x)) {
    throw DomainError("pdf: x is NaN");
  }
  if (x < spec.support_lo || x >= spec.support_hi) {
    return 0.0;
  }
  const double rate = spec.rate(theta);
  const double ax = x == spec.support_lo ? 0.0 : spec.transform(x);
  return spec.transform_derivative(x) * rate * std::exp(-ax * rate);
}

double quantile(const FamilySpec& spec, double theta, double u) {
  require_theta(spec, theta);
  if (!(u >= 0.0 && u < 1.0)) {
    throw DomainError("quantile: u must lie in [0, 1), got " + describe(u));
  }
  if (u == 0.0) {
    return spec.support_lo;
  }
  return transform_inverse(spec, -std::log1p(-u) / spec.rate(theta));
}

// ---------------------------------------------------------------- validation

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const CheckResult* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) {
      return &c;
    }
  }
  return nullptr;
}

std::vector<double> support_grid(const FamilySpec& spec, std::size_t n) {
  return interior_grid(spec.support_lo, spec.support_hi, n, 3.0);
}

std::vector<double> theta_grid(const FamilySpec& spec, std::size_t n) {
  return interior_grid(spec.theta_domain.lo, spec.theta_domain.hi, n, 2.0);
}

namespace {

// Records the first failing point and keeps the worst residual.
struct CheckBuilder {
  CheckResult result;

  explicit CheckBuilder(std::string name) {
    result.name = std::move(name);
    result.passed = true;
  }

  void fail_at(double point, std::string detail) {
    if (result.passed) {
      result.first_failure = point;
      result.detail = std::move(detail);
    }
    result.passed = false;
  }

  CheckResult done() { return std::move(result); }
};

double relative_scale(double v) { return std::max(std::abs(v), 1.0); }

CheckResult check_increasing(const FamilySpec& spec, const std::vector<double>& xs) {
  CheckBuilder c(kCheckIncreasing);
  double worst = kInf;
  double prev = spec.transform(xs.front());
  if (!finite(prev)) {
    c.fail_at(xs.front(), "A is not finite");
  }
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double cur = spec.transform(xs[i]);
    if (!finite(cur)) {
      c.fail_at(xs[i], "A is not finite");
      continue;
    }
    const double diff = cur - prev;
    worst = std::min(worst, diff);
    if (!(diff > 0.0)) {
      c.fail_at(xs[i], "A(x) did not increase from the previous grid point");
    }
    prev = cur;
  }
  c.result.residual = worst;
  return c.done();
}

CheckResult check_anchor(const FamilySpec& spec) {
  CheckBuilder c(kCheckAnchor);
  const double a = spec.support_lo;
  if (!finite(a)) {
    c.result.detail = "lower support endpoint is unbounded; check skipped";
    return c.done();
  }
  double v = spec.transform(a);
  double at = a;
  if (!finite(v)) {
    // Open endpoint: take the limit from just inside the support.
    at = a + 1e-12 * relative_scale(a);
    v = spec.transform(at);
  }
  c.result.residual = std::abs(v);
  if (!finite(v) || std::abs(v) > 1e-9) {
    c.fail_at(at, "|A(a)| exceeds 1e-9");
  }
  return c.done();
}

CheckResult check_transform_inverse(const FamilySpec& spec, const std::vector<double>& xs) {
  CheckBuilder c(kCheckTransformInverse);
  double worst = 0.0;
  for (double x : xs) {
    double back = 0.0;
    try {
      back = transform_inverse(spec, spec.transform(x));
    } catch (const Error& e) {
      c.fail_at(x, e.what());
      continue;
    }
    const double rel = std::abs(back - x) / relative_scale(x);
    if (!finite(rel) || rel > 1e-9) {
      c.fail_at(x, "round trip error exceeds 1e-9 relative");
    }
    if (finite(rel)) {
      worst = std::max(worst, rel);
    } else {
      worst = kInf;
    }
  }
  c.result.residual = worst;
  return c.done();
}

CheckResult check_rate(const FamilySpec& spec, const std::vector<double>& thetas,
                       CheckResult& positivity) {
  CheckBuilder inv(kCheckRateInverse);
  CheckBuilder pos(kCheckRatePositive);
  double worst = 0.0;
  double min_rate = kInf;
  for (double th : thetas) {
    const double r = spec.rate(th);
    if (!finite(r) || !(r > 0.0)) {
      pos.fail_at(th, "B(theta) is not a positive finite number");
    }
    if (finite(r)) {
      min_rate = std::min(min_rate, r);
    }
    double back = 0.0;
    try {
      back = rate_inverse(spec, r);
    } catch (const Error& e) {
      inv.fail_at(th, e.what());
      continue;
    }
    const double rel = std::abs(back - th) / std::max(std::abs(th), 1e-300);
    if (!finite(rel) || rel > 1e-9) {
      inv.fail_at(th, "round trip error exceeds 1e-9 relative");
    }
    worst = finite(rel) ? std::max(worst, rel) : kInf;
  }
  inv.result.residual = worst;
  pos.result.residual = min_rate;
  positivity = pos.done();
  return inv.done();
}

CheckResult check_derivative(const FamilySpec& spec, const std::vector<double>& xs) {
  CheckBuilder c(kCheckDerivative);
  if (!spec.transform_derivative) {
    c.fail_at(xs.front(), "A_prime is not provided");
    return c.done();
  }
  double worst = 0.0;
  for (double x : xs) {
    double h = 1e-4 * relative_scale(x);
    if (finite(spec.support_lo)) {
      h = std::min(h, 1e-4 * (x - spec.support_lo));
    }
    if (finite(spec.support_hi)) {
      h = std::min(h, 1e-4 * (spec.support_hi - x));
    }
    const double d = spec.transform_derivative(x);
    const double fd = (spec.transform(x + h) - spec.transform(x - h)) / (2.0 * h);
    if (!finite(d) || !(d > 0.0)) {
      c.fail_at(x, "A_prime is not a positive finite number");
      worst = kInf;
      continue;
    }
    const double rel = std::abs(d - fd) / std::abs(d);
    if (!finite(rel) || rel > 1e-6) {
      c.fail_at(x, "A_prime differs from a central difference of A by more than 1e-6 relative");
    }
    worst = finite(rel) ? std::max(worst, rel) : kInf;
  }
  c.result.residual = worst;
  return c.done();
}

}  // namespace

ValidationReport validate_family(const FamilySpec& spec, std::size_t grid_size) {
  if (grid_size < 8) {
    throw ArgumentError("validate_family: grid_size must be >= 8");
  }
  if (!spec.transform || !spec.rate) {
    throw ArgumentError("validate_family: A and B must both be provided");
  }
  ValidationReport report;
  report.family = spec.name;
  const auto xs = support_grid(spec, grid_size);
  const auto thetas = theta_grid(spec, grid_size);

  report.checks.push_back(check_increasing(spec, xs));
  report.checks.push_back(check_anchor(spec));
  report.checks.push_back(check_transform_inverse(spec, xs));
  CheckResult positivity;
  report.checks.push_back(check_rate(spec, thetas, positivity));
  report.checks.push_back(std::move(positivity));
  report.checks.push_back(check_derivative(spec, xs));
  return report;
}

}  // namespace recmle
