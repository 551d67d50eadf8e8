#include "wbp/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>

#include "wbp/error.hpp"

namespace wbp {

double gegenbauer_weight_mass(double a) {
  return std::sqrt(std::numbers::pi) * std::exp(std::lgamma(a + 1.0) - std::lgamma(a + 1.5));
}

Rule1D gauss_gegenbauer(int points, double a) {
  if (points < 1) throw DomainError("gauss_gegenbauer: need at least one node");
  if (!(a > -1.0)) throw DomainError("gauss_gegenbauer: weight exponent must exceed -1");
  Rule1D rule;
  rule.nodes.resize(points);
  rule.weights.resize(points);

  if (std::abs(a + 0.5) < 1e-15) {
    // Chebyshev of the first kind: closed form.
    for (int j = 0; j < points; ++j) {
      rule.nodes[j] = -std::cos((2.0 * j + 1.0) * std::numbers::pi / (2.0 * points));
      rule.weights[j] = std::numbers::pi / points;
    }
    return rule;
  }

  // Golub–Welsch on the symmetric Jacobi matrix of the Gegenbauer family.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(points);
  Eigen::VectorXd sub(std::max(points - 1, 0));
  for (int k = 1; k < points; ++k) {
    const double kk = k;
    sub[k - 1] = std::sqrt(kk * (kk + 2.0 * a) / ((2.0 * kk + 2.0 * a - 1.0) * (2.0 * kk + 2.0 * a + 1.0)));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  const double mass = gegenbauer_weight_mass(a);
  for (int j = 0; j < points; ++j) {
    rule.nodes[j] = solver.eigenvalues()[j];
    const double v0 = solver.eigenvectors()(0, j);
    rule.weights[j] = mass * v0 * v0;
  }
  // Enforce exact symmetry of the rule.
  for (int j = 0; j < points / 2; ++j) {
    const int k = points - 1 - j;
    const double x = 0.5 * (rule.nodes[k] - rule.nodes[j]);
    const double w = 0.5 * (rule.weights[k] + rule.weights[j]);
    rule.nodes[j] = -x;
    rule.nodes[k] = x;
    rule.weights[j] = rule.weights[k] = w;
  }
  if (points % 2 == 1) rule.nodes[points / 2] = 0.0;
  return rule;
}

double integrate_endpoint_singular(const std::function<double(double)>& f, double lo, double hi, double rel_tol) {
  if (hi == lo) return 0.0;
  thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  // Abscissas may round onto an endpoint; the integrand is then irrelevant there.
  const auto guarded = [&](double x, double xc) {
    if (xc == 0.0) return 0.0;
    const double y = f(x);
    return std::isfinite(y) || std::abs(xc) > 1e-12 * (hi - lo) ? y : 0.0;
  };
  double result = 0.0;
  double error = 0.0;
  try {
    double l1 = 0.0;
    result = integrator.integrate(guarded, lo, hi, rel_tol, &error, &l1);
  } catch (const std::exception& e) {
    throw IntegrabilityError(std::string("radial integral failed: ") + e.what());
  }
  if (!std::isfinite(result)) throw IntegrabilityError("radial integral is not finite");
  if (error > 1e-6 * std::max(1.0, std::abs(result))) throw IntegrabilityError("radial integral did not converge");
  return result;
}

double integrate_adaptive(const std::function<double(double)>& f, double lo, double hi, double rel_tol,
                          unsigned max_depth) {
  if (hi == lo) return 0.0;
  double error = 0.0;
  const double result =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, max_depth, rel_tol, &error);
  if (!std::isfinite(result)) throw IntegrabilityError("adaptive integral is not finite");
  return result;
}

}  // namespace wbp
