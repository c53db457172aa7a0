#pragma once

#include <cstdint>
#include <random>

namespace recmle {

// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

// Engine seed for stream `stream` of seed `seed`:
//   splitmix64(seed ^ splitmix64(stream + 0x9E3779B97F4A7C15))
// Distinct (seed, stream) pairs give unrelated mt19937_64 states.
std::uint64_t mix_stream(std::uint64_t seed, std::uint64_t stream);

// Deterministic random stream identified by (seed, stream). Backed by
// mt19937_64 (period 2^19937 - 1), whose output sequence is fixed by the
// C++ standard, so results are reproducible across platforms.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on the open interval (0, 1) with 53 bits of resolution.
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

}  // namespace recmle
