#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "recmle/family.hpp"
#include "recmle/rng.hpp"

namespace recmle {

// Upper record values R_1 < ... < R_m with their 0-based positions in the
// base sequence.
struct RecordSequence {
  std::vector<double> values;
  std::vector<std::size_t> indices;

  std::size_t size() const { return values.size(); }
  double last() const { return values.back(); }
};

struct Provenance {
  enum class Kind { observed, simulated };
  Kind kind = Kind::observed;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

struct Sample {
  std::vector<double> values;
  Provenance provenance;

  std::size_t size() const { return values.size(); }
};

// Values strictly exceeding every earlier value; the first element is always
// a record and ties with the running maximum are not. Throws ArgumentError on
// empty input or NaN.
RecordSequence extract_upper_records(std::span<const double> xs);

// n inverse-CDF draws from the stream.
Sample sample_iid(const FamilySpec& spec, double theta, std::size_t n, RngStream& rng);

// Inverse-CDF transform of caller-supplied uniforms in [0, 1).
Sample sample_iid_from_uniforms(const FamilySpec& spec, double theta, std::span<const double> u);

// First m upper records via A(R_i) = E_1 + ... + E_i with E_j exponential of
// mean 1/B(theta). Indices are synthetic (0..m-1).
RecordSequence sample_records_direct(const FamilySpec& spec, double theta, std::size_t m,
                                     RngStream& rng);

inline constexpr std::uint64_t kSequentialDrawCap = 10'000'000;

// First m upper records of an i.i.d. sequence, drawing until they occur.
// Throws RecordCapExceeded if more than max_draws base draws are needed.
RecordSequence sample_records_sequential(const FamilySpec& spec, double theta, std::size_t m,
                                         RngStream& rng,
                                         std::uint64_t max_draws = kSequentialDrawCap);

}  // namespace recmle
