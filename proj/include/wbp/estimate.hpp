#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <string>
#include <thread>
#include <vector>

#include "wbp/random.hpp"

namespace wbp {

/// A numeric result together with its error bar.
///
/// For Monte Carlo values `std_error` is the sample standard deviation over
/// sqrt(samples). Deterministic quadrature reports either zero or a
/// refinement-based error estimate (see `ErrorKind`).
struct Estimate {
  enum class ErrorKind { none, monte_carlo, quadrature_refinement };

  double value = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
  ErrorKind error_kind = ErrorKind::none;
};

std::string to_string(Estimate::ErrorKind kind);

/// Running mean and variance (Welford), mergeable in a fixed order.
class MeanAccumulator {
 public:
  void add(double x) noexcept {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
  }

  void merge(const MeanAccumulator& other) noexcept {
    if (other.count_ == 0) return;
    if (count_ == 0) {
      *this = other;
      return;
    }
    const double total = static_cast<double>(count_ + other.count_);
    const double delta = other.mean_ - mean_;
    mean_ += delta * static_cast<double>(other.count_) / total;
    m2_ += other.m2_ + delta * delta * static_cast<double>(count_) * static_cast<double>(other.count_) / total;
    count_ += other.count_;
  }

  std::size_t count() const noexcept { return count_; }
  double mean() const noexcept { return mean_; }
  double variance() const noexcept { return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0; }

  Estimate estimate(double scale = 1.0) const {
    Estimate e;
    e.value = scale * mean_;
    e.samples = count_;
    e.std_error = count_ > 1 ? std::abs(scale) * std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
    e.error_kind = Estimate::ErrorKind::monte_carlo;
    return e;
  }

 private:
  std::size_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Runs `task(chunk)` for chunk = 0..count-1 on a small worker pool.
/// Results must be written to per-chunk storage; callers reduce in chunk order.
template <class Task>
void parallel_chunks(std::size_t count, Task&& task) {
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(hw, count);
  if (workers <= 1) {
    for (std::size_t c = 0; c < count; ++c) task(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t c = next++; c < count; c = next++) task(c);
    });
  }
  for (auto& t : pool) t.join();
}

inline constexpr std::size_t kMonteCarloChunk = 1024;

/// Monte Carlo means of K jointly sampled channels.
///
/// `sample(rng)` returns one draw of all channels; channel k's estimate is
/// scaled by `scale[k]`. Chunk c draws from `rng.derive(c)`, so the result is
/// independent of thread scheduling.
template <std::size_t K, class Sampler>
std::array<Estimate, K> monte_carlo(std::size_t samples, const RandomSource& rng, Sampler&& sample,
                                    const std::array<double, K>& scale) {
  const std::size_t chunks = (samples + kMonteCarloChunk - 1) / kMonteCarloChunk;
  std::vector<std::array<MeanAccumulator, K>> partial(chunks);
  parallel_chunks(chunks, [&](std::size_t c) {
    RandomSource local = rng.derive(c);
    const std::size_t begin = c * kMonteCarloChunk;
    const std::size_t end = std::min(samples, begin + kMonteCarloChunk);
    for (std::size_t s = begin; s < end; ++s) {
      const std::array<double, K> draw = sample(local);
      for (std::size_t k = 0; k < K; ++k) partial[c][k].add(draw[k]);
    }
  });
  std::array<MeanAccumulator, K> total{};
  for (const auto& p : partial)
    for (std::size_t k = 0; k < K; ++k) total[k].merge(p[k]);
  std::array<Estimate, K> out{};
  for (std::size_t k = 0; k < K; ++k) out[k] = total[k].estimate(scale[k]);
  return out;
}

template <class Sampler>
Estimate monte_carlo(std::size_t samples, const RandomSource& rng, Sampler&& sample, double scale = 1.0) {
  auto wrapped = [&](RandomSource& r) { return std::array<double, 1>{sample(r)}; };
  return monte_carlo<1>(samples, rng, wrapped, std::array<double, 1>{scale})[0];
}

/// Outcome of a numerical comparison that carries error bars.
enum class Verdict { holds, fails, indeterminate, not_applicable };

std::string to_string(Verdict v);

/// Classifies the claim `lhs <= rhs` given the margin rhs - lhs and its error.
///
/// A margin inside 3 standard errors is indeterminate, except that a margin
/// within the absolute roundoff allowance `tol` with an error bar no larger
/// than `tol` counts as equality and therefore holds.
Verdict classify_le(double margin, double std_error, double tol);

/// Same as classify_le, for the strict claim `lhs < rhs`; equality fails.
Verdict classify_lt(double margin, double std_error, double tol);

/// Combines two independent error bars.
inline double combine_errors(double a, double b) { return std::sqrt(a * a + b * b); }

}  // namespace wbp
