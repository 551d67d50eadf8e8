#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "wbp/radon.hpp"
#include "wbp/sphere_geom.hpp"

namespace wbp {

/// C_k^{(n-2)/2}(t) / C_k^{(n-2)/2}(1) for k = 0..max_degree (Legendre for n = 3).
std::vector<double> normalized_gegenbauer_all(int n, int max_degree, double t);
double normalized_gegenbauer(int n, int k, double t);

/// Real orthonormal spherical harmonics Y_{l,m}(theta) on S^2 for l <= max_degree,
/// stored at index l*l + l + m.
std::vector<double> real_spherical_harmonics(int max_degree, const Direction& theta);

inline int harmonic_index(int l, int m) { return l * l + l + m; }

enum class Basis { full_s2, zonal };

/// Coefficients of a function on S^{n-1}.
///
/// full_s2 (n = 3): f = sum c[l*l+l+m] Y_{l,m}.
/// zonal: f(theta) = sum c[k] G_k(<theta, axis>) with G_k the normalized Gegenbauer polynomial.
struct HarmonicExpansion {
  int n = 3;
  Basis basis = Basis::zonal;
  int max_degree = 0;
  std::vector<double> coeffs;
  Vec axis;

  double operator()(const Direction& theta) const;
  /// Zonal profile t -> f at <theta, axis> = t.
  double profile(double t) const;
  /// Mean-square energy (normalized measure) carried by degrees in [lo, hi] of the given parity.
  double energy(int lo, int hi, int parity = -1) const;
  double odd_energy() const { return energy(0, max_degree, 1); }
};

/// Analysis on S^2 by a (2L+2)-point Gauss–Legendre x (2L+2)-point trapezoid grid; exact for degree <= L.
HarmonicExpansion analyze(const SphereFunction& f, int max_degree);
double synthesize(const HarmonicExpansion& e, const Direction& theta);

/// Coefficients of an even-or-general profile in normalized Gegenbauer polynomials on S^{n-1}.
HarmonicExpansion zonal_analyze(const std::function<double(double)>& profile, int n, int max_degree,
                                int points = 0);

/// Mean of G_k^2 against the normalized weight (1 - t^2)^{(n-3)/2}.
double zonal_norm2(int n, int k);

/// Eigenvalue of the normalized dual transform (i = n-1) on degree-k harmonics.
double funk_multiplier(int n, int k);

struct FunkInversion {
  HarmonicExpansion phi;
  double max_amplification = 1.0;
  /// Energy of the input above the inversion degree, when known.
  double tail_energy = 0.0;
};

inline constexpr double kDefaultCondCap = 1e6;

/// Divides each coefficient by its Funk multiplier; the result phi satisfies R^*phi = g on normals.
FunkInversion funk_invert(const HarmonicExpansion& g, double cond_cap = kDefaultCondCap);
/// Full-S^2 inversion of g (n = 3) at degree L; tail energy estimated from a degree-2L analysis.
FunkInversion funk_invert(const SphereFunction& g, int max_degree, double cond_cap = kDefaultCondCap);
/// Zonal inversion of the profile of g about `axis`.
FunkInversion funk_invert_zonal(const std::function<double(double)>& profile, int n, int max_degree,
                                double cond_cap = kDefaultCondCap, const Vec& axis = Vec());

/// Given g1 on hyperplanes (as a function of the normal), returns g on S^{n-1} with R_{n-1} g = g1.
HarmonicExpansion hyperplane_radon_inverse(const HarmonicExpansion& g1, double cond_cap = kDefaultCondCap);

/// Expansion as a Grassmannian function on hyperplanes (argument is the unit normal).
GrassmannFunction as_hyperplane_function(const HarmonicExpansion& e);
SphereFunction as_sphere_function(const HarmonicExpansion& e);

/// CSV rows "degree,order,coefficient".
void write_expansion_csv(std::ostream& out, const HarmonicExpansion& e);
HarmonicExpansion read_expansion_csv(std::istream& in, int n, Basis basis);

/// Random even function of degree <= max_degree: full harmonic basis on S^2, otherwise a sum
/// of zonal Gegenbauer terms about random axes. Coefficients decay like 1/(1+l).
SphereFunction random_even_band_limited(int n, int max_degree, RandomSource& rng);

}  // namespace wbp
