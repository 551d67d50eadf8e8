#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "wbp/estimate.hpp"
#include "wbp/sphere_geom.hpp"
#include "wbp/weights.hpp"

namespace wbp {

enum class BodyKind { ball, ellipsoid, lp_ball, harmonic_perturbed, revolution, from_b, custom };

std::string to_string(BodyKind kind);

/// An origin-symmetric star body given by its radial function.
class StarBody {
 public:
  using RadialFn = std::function<double(const Direction&)>;

  /// Probes evenness and positivity on 10^3 directions; throws InvalidParametersError on failure.
  StarBody(int n, RadialFn rho, BodyKind kind, bool smooth, std::string description);

  int n() const noexcept { return n_; }
  BodyKind kind() const noexcept { return kind_; }
  bool smooth() const noexcept { return smooth_; }
  const std::string& description() const noexcept { return description_; }

  /// rho(theta); throws InvalidBodyError on a non-positive or non-finite value.
  double radial(const Direction& theta) const;

 private:
  int n_;
  RadialFn rho_;
  BodyKind kind_;
  bool smooth_;
  std::string description_;
};

StarBody make_ball(int n, double radius);
StarBody make_ellipsoid(const std::vector<double>& semi_axes);
/// Unit ball of the l^p norm, p >= 1.
StarBody make_lp_ball(int n, double p);
/// rho = (1 + h)^{1/m} with h even.
StarBody make_harmonic_perturbed(int n, std::function<double(const Direction&)> h, double m,
                                 std::string description = "harmonic perturbation");
/// rho(theta) = profile(angle between theta and e_n), profile on [0, pi] symmetric about pi/2.
StarBody make_revolution(int n, std::function<double(double)> profile, std::string description = "revolution");
/// The body whose b-function for (u, i) equals b.
StarBody make_from_b(const Weight& u, int i, std::function<double(const Direction&)> b,
                     std::string description = "from b-function");

/// V_v(K): polar integral of r^{n-1} v(r theta) over [0, rho(theta)].
Estimate weighted_volume(const StarBody& body, const Weight& v, const SphereQuadrature& q);

/// Monte Carlo V_v(K) with `samples` uniform directions.
Estimate weighted_volume_mc(const StarBody& body, const Weight& v, std::size_t samples, const RandomSource& rng);

inline constexpr double kRadiusCap = 1e6;

/// The unique rho with integral_0^rho r^{i-1} u(r theta) dr = b.
double invert_b(double b, const Weight& u, const Direction& theta, int i);

struct ConvexityVerdict {
  bool pass = true;
  std::size_t pairs = 0;
  /// Violating pair and midpoint excess ||z|| / rho(z/||z||) - 1.
  std::optional<Direction> witness_a;
  std::optional<Direction> witness_b;
  double excess = 0.0;
};

/// Midpoint-containment probe over random boundary pairs (necessary condition only).
/// Half of the pairs are global, half are nearby (angular separation log-uniform in [1e-3, 0.5]).
ConvexityVerdict is_convex_sampled(const StarBody& body, std::size_t pairs, double tol, const RandomSource& rng);

/// CSV with header x1..xn,rho.
void write_radial_csv(std::ostream& out, const StarBody& body, const std::vector<Direction>& directions);

}  // namespace wbp
