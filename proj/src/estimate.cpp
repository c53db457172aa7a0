#include "recmle/estimate.hpp"

#include <cmath>

#include "recmle/error.hpp"
#include "recmle/format.hpp"
#include "recmle/summation.hpp"

namespace recmle {

const char* to_string(EstimateSource s) {
  return s == EstimateSource::sample ? "sample" : "records";
}

namespace {

void require_in_support(const FamilySpec& spec, double x, std::size_t i) {
  if (std::isnan(x) || !in_support(spec, x)) {
    throw ArgumentError("observation " + std::to_string(i) + " = " + format_double(x) +
                        " lies outside the support of " + spec.name);
  }
}

double transform_at(const FamilySpec& spec, double x) {
  return x == spec.support_lo ? 0.0 : spec.transform(x);
}

EstimateReport finish(const FamilySpec& spec, EstimateSource source, std::size_t count,
                      double stat) {
  if (!(stat > 0.0)) {
    throw DegenerateSampleError(std::string("degenerate ") + to_string(source) +
                                ": sufficient statistic is zero (all mass at the lower support "
                                "endpoint)");
  }
  const double target = static_cast<double>(count) / stat;
  EstimateReport r;
  r.theta_hat = rate_inverse(spec, target);
  r.source = source;
  r.count = count;
  r.sufficient_stat = stat;
  r.family = spec.name;
  return r;
}

void require_stat(std::size_t count, double stat) {
  if (count == 0) {
    throw ArgumentError("plug-in estimate needs at least one observation");
  }
  if (!(stat > 0.0)) {
    throw DegenerateSampleError("plug-in estimate: sufficient statistic is zero");
  }
}

}  // namespace

double sufficient_statistic(const FamilySpec& spec, std::span<const double> xs) {
  if (xs.empty()) {
    throw ArgumentError("sample is empty");
  }
  CompensatedSum sum;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    require_in_support(spec, xs[i], i);
    sum.add(transform_at(spec, xs[i]));
  }
  return sum.value();
}

EstimateReport mle_theta_sample(const FamilySpec& spec, std::span<const double> xs) {
  const double stat = sufficient_statistic(spec, xs);
  return finish(spec, EstimateSource::sample, xs.size(), stat);
}

EstimateReport mle_theta_records(const FamilySpec& spec, const RecordSequence& rs) {
  if (rs.values.empty()) {
    throw ArgumentError("record sequence is empty");
  }
  const double last = rs.last();
  require_in_support(spec, last, rs.size() - 1);
  return finish(spec, EstimateSource::records, rs.size(), transform_at(spec, last));
}

double plugin_pdf(const FamilySpec& spec, std::size_t count, double stat, double x) {
  require_stat(count, stat);
  if (x < spec.support_lo || x >= spec.support_hi) {
    return 0.0;
  }
  const double scale = static_cast<double>(count) / stat;
  return scale * spec.transform_derivative(x) * std::exp(-scale * transform_at(spec, x));
}

double plugin_cdf(const FamilySpec& spec, std::size_t count, double stat, double x) {
  require_stat(count, stat);
  if (x <= spec.support_lo) {
    return 0.0;
  }
  if (x >= spec.support_hi) {
    return 1.0;
  }
  const double scale = static_cast<double>(count) / stat;
  return -std::expm1(-scale * spec.transform(x));
}

double pdf_hat_sample(const FamilySpec& spec, std::span<const double> xs, double x) {
  const auto est = mle_theta_sample(spec, xs);
  return plugin_pdf(spec, est.count, est.sufficient_stat, x);
}

double cdf_hat_sample(const FamilySpec& spec, std::span<const double> xs, double x) {
  const auto est = mle_theta_sample(spec, xs);
  return plugin_cdf(spec, est.count, est.sufficient_stat, x);
}

double pdf_hat_records(const FamilySpec& spec, const RecordSequence& rs, double x) {
  const auto est = mle_theta_records(spec, rs);
  return plugin_pdf(spec, est.count, est.sufficient_stat, x);
}

double cdf_hat_records(const FamilySpec& spec, const RecordSequence& rs, double x) {
  const auto est = mle_theta_records(spec, rs);
  return plugin_cdf(spec, est.count, est.sufficient_stat, x);
}

}  // namespace recmle
