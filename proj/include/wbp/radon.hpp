#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "wbp/estimate.hpp"
#include "wbp/sphere_geom.hpp"

namespace wbp {

enum class Parity { even, odd, general };

/// A function on S^{n-1}.
struct SphereFunction {
  int n = 0;
  std::function<double(const Direction&)> eval;
  Parity parity = Parity::general;

  double operator()(const Direction& t) const { return eval(t); }
};

/// A function on G_{n,i}; must not depend on the choice of frame.
struct GrassmannFunction {
  int n = 0;
  int i = 0;
  std::function<double(const SubspaceFrame&)> eval;

  double operator()(const SubspaceFrame& xi) const { return eval(xi); }
};

/// A function on G_{n,n-1} given by an even function of the unit normal.
GrassmannFunction hyperplane_function(int n, std::function<double(const Direction&)> of_normal);

/// Throws ParityError when f(-theta) differs from the declared parity on probe directions.
void check_parity(const SphereFunction& f, std::size_t probes = 64, double tol = 1e-10);

/// Atoms on G_{n,i} with nonnegative masses.
class DiscreteMeasure {
 public:
  void add(SubspaceFrame xi, double mass);
  const std::vector<std::pair<SubspaceFrame, double>>& atoms() const noexcept { return atoms_; }
  double total_mass() const;

 private:
  std::vector<std::pair<SubspaceFrame, double>> atoms_;
};

/// p_0 = span(e_{n-i+1}, ..., e_n).
SubspaceFrame reference_subspace(int n, int i);

/// (R_i f)(xi): unnormalized integral over S^{n-1} ∩ xi; q is a rule on S^{i-1}.
double radon(const SphereFunction& f, const SubspaceFrame& xi, const SphereQuadrature& q);

/// (R_i^* phi)(theta): average of phi(r_theta gamma p_0) over Haar gamma in SO(n-1).
Estimate dual_radon(const GrassmannFunction& phi, const Direction& theta, std::size_t rotations,
                    const RandomSource& rng);

/// One draw of the subspace r_theta gamma p_0 used by dual_radon.
SubspaceFrame random_subspace_through(const Direction& theta, int i, RandomSource& rng);

/// (sigma_{n-1}/sigma_{i-1}) sum_j mass_j (R_i f)(xi_j).
double measure_pairing(const DiscreteMeasure& mu, const SphereFunction& f, const SphereQuadrature& q);

/// Mean of phi over G_{n,i} with respect to the invariant probability measure.
Estimate grassmann_mean(const GrassmannFunction& phi, std::size_t samples, const RandomSource& rng);

struct DualityReport {
  Estimate lhs;  // (1/sigma_{i-1}) int_G (R f) phi
  Estimate rhs;  // (1/sigma_{n-1}) int_S f (R^* phi)
  double residual = 0.0;
  double combined_error = 0.0;
  Verdict verdict = Verdict::indeterminate;
};

/// Both sides of the duality relation by seeded Monte Carlo. The left side samples subspaces
/// and integrates over each subsphere with q; the right side samples (theta, gamma) jointly.
DualityReport duality_residual(const SphereFunction& f, const GrassmannFunction& phi, const SphereQuadrature& q,
                               std::size_t samples, const RandomSource& rng);

/// phi(xi) = c0 + tr(F^T A F) + c1 tr(F^T B F)^2 for random symmetric A, B: smooth and frame invariant.
GrassmannFunction random_smooth_grassmann(int n, int i, RandomSource& rng);

}  // namespace wbp
