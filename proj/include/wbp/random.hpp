#pragma once

#include <cstdint>
#include <random>

namespace wbp {

/// Seeded stream of pseudo-random numbers.
///
/// A source is identified by (seed, stream). Two sources with the same pair
/// produce bit-identical sequences; `derive` hands out child streams so that
/// parallel tasks draw from streams fixed by their task index, not by the
/// order in which they are scheduled.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  RandomSource derive(std::uint64_t task) const;

  /// Uniform on [0, 1).
  double uniform();
  double normal();

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace wbp
