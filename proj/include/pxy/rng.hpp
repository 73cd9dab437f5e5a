#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "pxy/core.hpp"
#include "pxy/normal.hpp"

namespace pxy {

/// A reproducible random stream identified by (seed, stream_index).
///
/// The engine is a 64-bit Mersenne Twister initialised through std::seed_seq
/// from the four 32-bit halves of the seed and the index, so streams are
/// split by key rather than by position and replicate r can be rebuilt
/// anywhere without touching the other streams. Derived variates (uniform,
/// normal, bounded integer) are computed here rather than through
/// <random> distributions, whose algorithms are implementation-defined.
class RngStream {
public:
  using result_type = std::uint64_t;

  RngStream(Seed seed, std::uint64_t stream_index)
      : seed_(seed), index_(stream_index), engine_(make_engine(seed, stream_index)) {}

  Seed seed() const noexcept { return seed_; }
  std::uint64_t stream_index() const noexcept { return index_; }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

  /// Standard normal by inversion.
  double normal() { return normal_quantile(uniform()); }

  /// Uniform integer in [0, n); unbiased rejection on the top of the range.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = max() - max() % n;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % n;
  }

private:
  static std::mt19937_64 make_engine(Seed seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed.value),
                      static_cast<std::uint32_t>(seed.value >> 32),
                      static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
  }

  Seed seed_;
  std::uint64_t index_;
  std::mt19937_64 engine_;
};

/// Streams 0..k-1 of a seed.
inline std::vector<RngStream> split_streams(Seed seed, std::size_t k) {
  if (k == 0) throw DomainError("split_streams: k must be at least 1");
  std::vector<RngStream> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.emplace_back(seed, i);
  return out;
}

}  // namespace pxy
