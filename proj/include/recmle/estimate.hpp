#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "recmle/family.hpp"
#include "recmle/records.hpp"

namespace recmle {

enum class EstimateSource { sample, records };

const char* to_string(EstimateSource s);

// theta_hat = B^-1(count / T) where T = sum A(X_i) for a sample of size n,
// or T = A(R_m) for m upper records.
struct EstimateReport {
  double theta_hat = 0.0;
  EstimateSource source = EstimateSource::sample;
  std::size_t count = 0;  // n or m
  double sufficient_stat = 0.0;
  std::string family;
};

// Sum of A(x_i). Throws ArgumentError for empty input or any observation
// outside the support (observations are never silently dropped).
double sufficient_statistic(const FamilySpec& spec, std::span<const double> xs);

// Throws DegenerateSampleError when T == 0 and RangeError when n/T is not in
// the range of B over the parameter domain.
EstimateReport mle_theta_sample(const FamilySpec& spec, std::span<const double> xs);
EstimateReport mle_theta_records(const FamilySpec& spec, const RecordSequence& rs);

// Plug-in density and distribution estimates written directly in terms of
// the sufficient statistic:
//   f_hat(x) = c A'(x) / T * exp(-c A(x) / T)
//   F_hat(x) = 1 - exp(-c A(x) / T)
// with c the sample size or record count.
double plugin_pdf(const FamilySpec& spec, std::size_t count, double stat, double x);
double plugin_cdf(const FamilySpec& spec, std::size_t count, double stat, double x);

double pdf_hat_sample(const FamilySpec& spec, std::span<const double> xs, double x);
double cdf_hat_sample(const FamilySpec& spec, std::span<const double> xs, double x);
double pdf_hat_records(const FamilySpec& spec, const RecordSequence& rs, double x);
double cdf_hat_records(const FamilySpec& spec, const RecordSequence& rs, double x);

}  // namespace recmle
