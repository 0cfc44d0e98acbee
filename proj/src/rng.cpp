#include "hurstq/rng.hpp"

#include "hurstq/normal.hpp"

namespace hurstq {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) {
  // Two mixing rounds decorrelate nearby (seed, stream) pairs before the
  // engine is seeded.
  std::uint64_t key = splitmix64(seed ^ splitmix64(stream));
  std::uint64_t k1 = splitmix64(key);
  std::uint64_t k2 = splitmix64(k1);
  std::uint64_t k3 = splitmix64(k2);
  std::seed_seq seq{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32),
                    static_cast<std::uint32_t>(k1),  static_cast<std::uint32_t>(k1 >> 32),
                    static_cast<std::uint32_t>(k2),  static_cast<std::uint32_t>(k2 >> 32),
                    static_cast<std::uint32_t>(k3),  static_cast<std::uint32_t>(k3 >> 32)};
  gen_ = std::mt19937_64(seq);
}

double RngStream::uniform() {
  // 53-bit mantissa shifted into the open interval.
  return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::gaussian() { return normal_quantile(uniform()); }

bool RngStream::bernoulli(double p) { return uniform() < p; }

}  // namespace hurstq
