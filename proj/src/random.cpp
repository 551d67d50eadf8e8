#include "wbp/random.hpp"

namespace wbp {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomSource::RandomSource(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), engine_(splitmix64(seed ^ splitmix64(stream + 0x51ed270b27a9d3c1ULL))) {}

RandomSource RandomSource::derive(std::uint64_t task) const {
  return RandomSource(seed_, splitmix64(stream_ * 0x2545f4914f6cdd1dULL + task + 1));
}

double RandomSource::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomSource::normal() { return normal_(engine_); }

}  // namespace wbp
