#pragma once

#include <functional>
#include <vector>

namespace wbp {

/// Nodes and weights of a one-dimensional rule on [-1, 1].
struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss rule for the weight (1 - x^2)^a, a > -1 (Gauss–Gegenbauer).
/// `points` nodes integrate polynomials of degree <= 2*points - 1 exactly.
Rule1D gauss_gegenbauer(int points, double a);

inline Rule1D gauss_legendre(int points) { return gauss_gegenbauer(points, 0.0); }

/// Integral of (1 - x^2)^a over [-1, 1].
double gegenbauer_weight_mass(double a);

/// Integral of f over [lo, hi] by tanh-sinh quadrature; tolerates integrable
/// singularities at either endpoint. Throws IntegrabilityError on a non-finite result.
double integrate_endpoint_singular(const std::function<double(double)>& f, double lo, double hi,
                                   double rel_tol = 1e-13);

/// Adaptive Gauss–Kronrod (61-point) integral, robust to interior kinks.
double integrate_adaptive(const std::function<double(double)>& f, double lo, double hi, double rel_tol = 1e-13,
                          unsigned max_depth = 15);

}  // namespace wbp
