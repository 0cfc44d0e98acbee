#pragma once

#include <cstdint>
#include <random>

namespace hurstq {

// One round of the SplitMix64 mixer. Used to key replication streams.
std::uint64_t splitmix64(std::uint64_t x);

// Reproducible random stream keyed by (seed, stream). Distinct stream ids
// under the same seed give statistically independent sequences, so Monte
// Carlo replications can run in parallel and still be bit-reproducible.
//
// Normal deviates come from the inverse-CDF transform applied to a 53-bit
// uniform; no other Gaussian method is used anywhere in the library.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  double uniform();   // strictly inside (0, 1)
  double gaussian();  // N(0, 1)
  bool bernoulli(double p);

 private:
  std::mt19937_64 gen_;
};

}  // namespace hurstq
