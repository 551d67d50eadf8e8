#pragma once

// Shared test inputs: random band-limited even functions and smooth Grassmannian functions.

#include <cmath>
#include <functional>
#include <vector>

#include "wbp/harmonic.hpp"
#include "wbp/radon.hpp"

namespace wbp::testing {

inline SphereFunction random_even_band_limited(RandomSource& rng, int max_degree) {
  return wbp::random_even_band_limited(3, max_degree, rng);
}

inline GrassmannFunction random_smooth_grassmann(RandomSource& rng, int n, int i) {
  return wbp::random_smooth_grassmann(n, i, rng);
}

}  // namespace wbp::testing

namespace wbp::testing {

/// Random positive alpha, beta on (0, inf) with r^{n-i} alpha / beta nondecreasing.
///
/// beta is smooth on two pieces; the ratio h is a positive nondecreasing piecewise-linear function.
struct LemmaInstance {
  std::function<double(double)> alpha;
  std::function<double(double)> beta;
  double a = 0.0;
  double b = 0.0;
  int n = 3;
  int i = 2;
};

inline LemmaInstance random_lemma_instance(RandomSource& rng) {
  LemmaInstance out;
  out.n = 2 + static_cast<int>(rng.uniform() * 4);
  out.i = 1 + static_cast<int>(rng.uniform() * (out.n - 1));
  out.a = 3.0 * (1.0 - rng.uniform());
  out.b = 3.0 * (1.0 - rng.uniform());
  std::vector<double> knots{0.0};
  std::vector<double> values{0.1 + rng.uniform()};
  for (int k = 0; k < 4; ++k) {
    knots.push_back(knots.back() + 0.8 * rng.uniform() + 0.05);
    values.push_back(values.back() + (rng.uniform() < 0.3 ? 0.0 : 2.0 * rng.uniform()));
  }
  const auto h = [knots, values](double r) {
    if (r >= knots.back()) return values.back();
    std::size_t k = 1;
    while (knots[k] < r) ++k;
    const double s = (r - knots[k - 1]) / (knots[k] - knots[k - 1]);
    return values[k - 1] + s * (values[k] - values[k - 1]);
  };
  const double split = 3.0 * rng.uniform();
  const double w1 = 1 + 4 * rng.uniform(), w2 = 1 + 4 * rng.uniform(), c = 0.9 * rng.uniform();
  out.beta = [=](double r) { return r < split ? 1.0 + c * std::sin(w1 * r) : 0.5 + std::exp(-w2 * (r - split)); };
  const int gap = out.n - out.i;
  out.alpha = [h, beta = out.beta, gap](double r) { return h(r) * beta(r) / std::pow(r, gap); };
  return out;
}

}  // namespace wbp::testing
