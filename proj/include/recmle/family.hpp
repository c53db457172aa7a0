#pragma once

// Members of the one-parameter family F(x; theta) = 1 - exp(-B(theta) A(x)).
//
// A is the increasing "transform" of the observation scale onto [0, inf),
// B is the positive "rate" attached to theta. A(X) is then exponential with
// rate B(theta), which is what every estimator in this library relies on.

#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace recmle {

using ScalarFn = std::function<double(double)>;

// Open interval (lo, hi); either end may be infinite.
struct Interval {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double v) const { return v > lo && v < hi; }
};

// How theta maps to the rate. Lets moment formulas that only hold for a
// particular parameterisation check their applicability.
enum class RateMap { reciprocal, identity, custom };

struct FamilySpec {
  std::string name;

  ScalarFn transform;             // A
  ScalarFn transform_derivative;  // A'
  ScalarFn transform_inverse;     // A^-1, optional (root-found when empty)
  ScalarFn rate;                  // B
  ScalarFn rate_inverse;          // B^-1, optional (root-found when empty)

  double support_lo = 0.0;  // a, with A(a) = 0
  double support_hi = std::numeric_limits<double>::infinity();  // b
  Interval theta_domain;
  RateMap rate_map = RateMap::custom;
};

enum class BuiltinKind { exponential, lomax, weibull, pareto };

struct BuiltinFamily {
  BuiltinKind kind = BuiltinKind::exponential;
  double weibull_alpha = 2.0;  // shape, Weibull only
  double pareto_k = 1.0;       // scale, Pareto only
};

FamilySpec make_family(const BuiltinFamily& builtin);
FamilySpec exponential_family();
FamilySpec lomax_family();
FamilySpec weibull_family(double alpha);
FamilySpec pareto_family(double k);

// Solves A(x) = y on the support. Uses the analytic inverse when present,
// otherwise bisection on an expanding bracket (absolute tolerance 1e-12).
double transform_inverse(const FamilySpec& spec, double y);

// Solves B(theta) = y on theta_domain, analytic when available. Throws
// RangeError naming y and the sampled range of B when no bracket exists.
double rate_inverse(const FamilySpec& spec, double y);

double cdf(const FamilySpec& spec, double theta, double x);
double pdf(const FamilySpec& spec, double theta, double x);
double quantile(const FamilySpec& spec, double theta, double u);

// Throws DomainError when theta is outside the family's parameter domain.
void require_theta(const FamilySpec& spec, double theta);

bool in_support(const FamilySpec& spec, double x);

struct CheckResult {
  std::string name;
  bool passed = false;
  double residual = 0.0;  // worst measured value for the check
  std::optional<double> first_failure;
  std::string detail;
};

struct ValidationReport {
  std::string family;
  std::vector<CheckResult> checks;

  bool passed() const;
  const CheckResult* find(const std::string& name) const;
};

// Check names used in ValidationReport.
inline constexpr const char* kCheckIncreasing = "A increasing";
inline constexpr const char* kCheckAnchor = "A(a) = 0";
inline constexpr const char* kCheckTransformInverse = "A_inv(A(x)) = x";
inline constexpr const char* kCheckRateInverse = "B_inv(B(theta)) = theta";
inline constexpr const char* kCheckRatePositive = "B(theta) > 0";
inline constexpr const char* kCheckDerivative = "A_prime matches A";

ValidationReport validate_family(const FamilySpec& spec, std::size_t grid_size);

// Deterministic grids used by validation; exposed for tests.
std::vector<double> support_grid(const FamilySpec& spec, std::size_t n);
std::vector<double> theta_grid(const FamilySpec& spec, std::size_t n);

// ---------------------------------------------------------------- registry
//
// Grammar: name [ ":" key "=" value { "," key "=" value } ]
// Values are decimal reals. Examples: "exponential", "weibull:alpha=2",
// "pareto:k=1".

struct FamilyParameterInfo {
  std::string key;
  double default_value;
  std::string description;
};

struct RegistryEntry {
  std::string name;
  std::string transform_text;
  std::string rate_text;
  std::string support_text;
  std::vector<FamilyParameterInfo> parameters;
};

const std::vector<RegistryEntry>& family_registry();

// Parses a family string, throwing ArgumentError on grammar violations,
// unknown names or keys, and invalid parameter values.
FamilySpec parse_family(const std::string& text);

}  // namespace recmle
