#include "recmle/records.hpp"

#include <cmath>
#include <string>

#include "recmle/error.hpp"

namespace recmle {

RecordSequence extract_upper_records(std::span<const double> xs) {
  if (xs.empty()) {
    throw ArgumentError("extract_upper_records: input is empty");
  }
  RecordSequence out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double v = xs[i];
    if (std::isnan(v)) {
      throw ArgumentError("extract_upper_records: NaN at index " + std::to_string(i));
    }
    if (out.values.empty() || v > out.values.back()) {
      out.values.push_back(v);
      out.indices.push_back(i);
    }
  }
  return out;
}

Sample sample_iid(const FamilySpec& spec, double theta, std::size_t n, RngStream& rng) {
  if (n == 0) {
    throw ArgumentError("sample_iid: n must be >= 1");
  }
  require_theta(spec, theta);
  Sample s;
  s.values.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.values.push_back(quantile(spec, theta, rng.uniform()));
  }
  s.provenance = {Provenance::Kind::simulated, rng.seed(), rng.stream()};
  return s;
}

Sample sample_iid_from_uniforms(const FamilySpec& spec, double theta, std::span<const double> u) {
  if (u.empty()) {
    throw ArgumentError("sample_iid: n must be >= 1");
  }
  Sample s;
  s.values.reserve(u.size());
  for (double ui : u) {
    s.values.push_back(quantile(spec, theta, ui));
  }
  s.provenance.kind = Provenance::Kind::simulated;
  return s;
}

RecordSequence sample_records_direct(const FamilySpec& spec, double theta, std::size_t m,
                                     RngStream& rng) {
  if (m == 0) {
    throw ArgumentError("sample_records_direct: m must be >= 1");
  }
  require_theta(spec, theta);
  const double mean = 1.0 / spec.rate(theta);
  RecordSequence out;
  out.values.reserve(m);
  out.indices.reserve(m);
  double level = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    level += -std::log(rng.uniform()) * mean;
    out.values.push_back(transform_inverse(spec, level));
    out.indices.push_back(i);
  }
  return out;
}

RecordSequence sample_records_sequential(const FamilySpec& spec, double theta, std::size_t m,
                                         RngStream& rng, std::uint64_t max_draws) {
  if (m == 0) {
    throw ArgumentError("sample_records_sequential: m must be >= 1");
  }
  require_theta(spec, theta);
  RecordSequence out;
  out.values.reserve(m);
  out.indices.reserve(m);
  for (std::uint64_t i = 0; out.size() < m; ++i) {
    if (i >= max_draws) {
      throw RecordCapExceeded("sample_records_sequential: " + std::to_string(m) +
                              " records needed more than " + std::to_string(max_draws) +
                              " draws");
    }
    const double x = quantile(spec, theta, rng.uniform());
    if (out.values.empty() || x > out.values.back()) {
      out.values.push_back(x);
      out.indices.push_back(static_cast<std::size_t>(i));
    }
  }
  return out;
}

}  // namespace recmle
