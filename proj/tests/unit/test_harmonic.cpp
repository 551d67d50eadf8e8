#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/gegenbauer.hpp>
#include <boost/math/special_functions/legendre.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fixtures.hpp"
#include "wbp/error.hpp"
#include "wbp/harmonic.hpp"

using namespace wbp;

namespace {

// Closed-form oracle: C_k^lam(0)/C_k^lam(1) from Pochhammer ratios.
double gegenbauer_ratio_at_zero(int n, int k) {
  const double lam = 0.5 * (n - 2);
  const int h = k / 2;
  const double at0 = (h % 2 ? -1.0 : 1.0) * std::exp(std::lgamma(h + lam) - std::lgamma(lam) - std::lgamma(h + 1.0));
  const double at1 = std::exp(std::lgamma(k + 2 * lam) - std::lgamma(k + 1.0) - std::lgamma(2 * lam));
  return at0 / at1;
}

// Independent quadrature oracle: average of the normalized Gegenbauer over a great subsphere
// through the axis, evaluated at an equatorial point, divided by the value there.
double multiplier_by_tanh_sinh(int n, int k) {
  const double lam = 0.5 * (n - 2);
  const double norm = boost::math::gegenbauer(k, lam, 1.0);
  const auto g = [&](double t) { return boost::math::gegenbauer(k, lam, t) / norm; };
  // t = sin u turns (1 - t^2)^{(n-4)/2} dt into cos^{n-3}(u) du, which is smooth.
  const double h = std::numbers::pi / 2;
  boost::math::quadrature::tanh_sinh<double> ts;
  const double num = ts.integrate([&](double u) { return g(std::sin(u)) * std::pow(std::cos(u), n - 3); }, -h, h, 1e-15);
  const double den = ts.integrate([&](double u) { return std::pow(std::cos(u), n - 3); }, -h, h, 1e-15);
  return num / den / g(0.0);
}

SphereFunction zonal_y20() {
  return {3, [](const Direction& t) { return std::sqrt(5 / (4 * std::numbers::pi)) * (3 * t[2] * t[2] - 1) / 2; },
          Parity::even};
}

}  // namespace

TEST_SUITE("harmonic") {
  TEST_CASE("gegenbauer polynomials") {
    for (double t : {-0.9, -0.3, 0.0, 0.41, 0.97}) {
      const auto p = normalized_gegenbauer_all(3, 10, t);
      for (int k = 0; k <= 10; ++k) CHECK(p[k] == doctest::Approx(boost::math::legendre_p(k, t)).epsilon(1e-13));
      for (int n : {4, 5}) {
        const double lam = 0.5 * (n - 2);
        for (int k = 0; k <= 12; ++k)
          CHECK(normalized_gegenbauer(n, k, t) ==
                doctest::Approx(boost::math::gegenbauer(k, lam, t) / boost::math::gegenbauer(k, lam, 1.0)).epsilon(1e-12));
      }
    }
    CHECK(normalized_gegenbauer(5, 2, 0.3) == doctest::Approx((5 * 0.09 - 1) / 4));
  }

  TEST_CASE("spherical harmonics are orthonormal") {
    const auto q = product_sphere_quadrature(3, 10);
    const int L = 6;
    const int count = (L + 1) * (L + 1);
    Mat gram = Mat::Zero(count, count);
    for (std::size_t j = 0; j < q.nodes.size(); ++j) {
      const auto y = real_spherical_harmonics(L, q.nodes[j]);
      for (int a = 0; a < count; ++a)
        for (int b = 0; b < count; ++b) gram(a, b) += q.weights[j] * y[a] * y[b];
    }
    CHECK((gram - Mat::Identity(count, count)).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("funk multipliers") {
    const double legendre[] = {1.0, -0.5, 0.375, -0.3125};
    for (int k = 0; k <= 6; k += 2) {
      CHECK(std::abs(funk_multiplier(3, k) - legendre[k / 2]) <= 1e-10);
      CHECK(std::abs(funk_multiplier(3, k) - boost::math::legendre_p(k, 0.0)) <= 1e-10);
    }
    for (int n = 3; n <= 5; ++n) {
      CHECK(funk_multiplier(n, 0) == doctest::Approx(1.0).epsilon(1e-14));
      double prev = 2.0;
      for (int k = 0; k <= 16; k += 2) {
        const double lam = funk_multiplier(n, k);
        CHECK(std::abs(lam - gegenbauer_ratio_at_zero(n, k)) <= 1e-10);
        CHECK(std::abs(lam - multiplier_by_tanh_sinh(n, k)) <= 1e-10);
        CHECK(lam * ((k / 2) % 2 ? -1.0 : 1.0) > 0.0);
        CHECK(std::abs(lam) < prev);
        prev = std::abs(lam);
      }
    }
    CHECK(funk_multiplier(5, 2) == doctest::Approx(-0.25).epsilon(1e-13));
    CHECK_THROWS_AS(funk_multiplier(3, 3), DomainError);
  }

  TEST_CASE("analysis and synthesis") {
    const auto y20 = analyze(zonal_y20(), 8);
    for (int j = 0; j < static_cast<int>(y20.coeffs.size()); ++j)
      CHECK(std::abs(y20.coeffs[j] - (j == harmonic_index(2, 0) ? 1.0 : 0.0)) < 1e-13);

    RandomSource rng(8);
    HarmonicExpansion e;
    e.n = 3;
    e.basis = Basis::full_s2;
    e.max_degree = 16;
    e.axis = Vec::Unit(3, 2);
    for (int j = 0; j < 17 * 17; ++j) e.coeffs.push_back(rng.normal());
    const SphereFunction f = as_sphere_function(e);
    const auto back = analyze(f, 16);
    double energy_in = 0.0, energy_back = 0.0, max_coeff_err = 0.0;
    for (int j = 0; j < 17 * 17; ++j) {
      energy_in += e.coeffs[j] * e.coeffs[j];
      energy_back += back.coeffs[j] * back.coeffs[j];
      max_coeff_err = std::max(max_coeff_err, std::abs(e.coeffs[j] - back.coeffs[j]));
    }
    CHECK(max_coeff_err < 1e-10);
    CHECK(std::abs(energy_in - energy_back) <= 1e-10 * energy_in);
    for (int k = 0; k < 50; ++k) {
      const Direction t = random_direction(rng, 3);
      CHECK(std::abs(synthesize(back, t) - f(t)) <= 1e-10);
    }
    // Isometry: coefficient energy equals the quadrature L2 norm.
    const auto q = product_sphere_quadrature(3, 17);
    const double l2 = q.integrate([&](const Direction& t) { return f(t) * f(t); }).value;
    CHECK(std::abs(l2 - energy_in) <= 1e-10 * energy_in);
  }

  TEST_CASE("kinked function truncation") {
    // |theta_3| is not band-limited; its degree-32 truncation error peaks at the equator kink.
    const SphereFunction f{3, [](const Direction& t) { return std::abs(t[2]); }, Parity::even};
    const auto e = analyze(f, 32);
    double max_err = 0.0, sum2 = 0.0;
    const auto probes = quasi_uniform_directions(3, 2000);
    for (const auto& t : probes) {
      const double err = std::abs(synthesize(e, t) - f(t));
      max_err = std::max(max_err, err);
      sum2 += err * err;
    }
    CHECK(max_err < 0.025);
    CHECK(std::sqrt(sum2 / probes.size()) < 3e-3);
  }

  TEST_CASE("zonal analysis") {
    const auto c = zonal_analyze([](double) { return 2.0; }, 5, 6);
    CHECK(c.coeffs[0] == doctest::Approx(2.0).epsilon(1e-14));
    for (int k = 1; k <= 6; ++k) CHECK(std::abs(c.coeffs[k]) < 1e-13);
    const auto g2 = zonal_analyze([](double t) { return normalized_gegenbauer(4, 2, t); }, 4, 6);
    for (int k = 0; k <= 6; ++k) CHECK(std::abs(g2.coeffs[k] - (k == 2 ? 1.0 : 0.0)) < 1e-13);
    const auto sq = zonal_analyze([](double t) { return t * t; }, 5, 8);
    int nonzero = 0;
    for (int k = 0; k <= 8; ++k) nonzero += std::abs(sq.coeffs[k]) > 1e-12;
    CHECK(nonzero == 2);
    for (double t = -1.0; t <= 1.0; t += 0.125) CHECK(std::abs(sq.profile(t) - t * t) <= 1e-12);
  }

  TEST_CASE("funk inversion") {
    const SphereFunction c{3, [](const Direction&) { return 1.7; }, Parity::even};
    const auto inv_c = funk_invert(c, 8);
    for (const auto& t : quasi_uniform_directions(3, 20)) CHECK(std::abs(synthesize(inv_c.phi, t) - 1.7) < 1e-12);

    const double eps = 0.9;
    const SphereFunction g{3, [&](const Direction& t) { return 1 + eps * zonal_y20()(t); }, Parity::even};
    const auto inv = funk_invert(g, 8);
    const double y20max = std::sqrt(5 / (4 * std::numbers::pi));
    RandomSource rng(21);
    for (const auto& t : quasi_uniform_directions(3, 20))
      CHECK(std::abs(synthesize(inv.phi, t) - (1 - 2 * eps * zonal_y20()(t))) < 1e-12);
    // eps exceeds 1/(2 max Y20), so phi goes negative at the pole.
    REQUIRE(eps > 1 / (2 * y20max));
    CHECK(synthesize(inv.phi, Direction::unit(3, 2)) < 0.0);
    CHECK(inv.tail_energy < 1e-20);

    const GrassmannFunction phi = as_hyperplane_function(inv.phi);
    for (const auto& t : quasi_uniform_directions(3, 10)) {
      const Estimate d = dual_radon(phi, t, 4000, rng.derive(static_cast<std::uint64_t>(t[0] * 1e6)));
      CHECK(std::abs(d.value - g(t)) <= 4 * d.std_error);
    }

    const SphereFunction mixed{3, [](const Direction& t) { return 1 + 0.2 * t[0]; }, Parity::general};
    CHECK_THROWS_AS(funk_invert(mixed, 8), ParityError);
    CHECK_THROWS_AS(funk_invert_zonal([](double t) { return 1 + 0.1 * t; }, 5, 6), ParityError);
    CHECK_THROWS_AS(funk_invert_zonal([](double t) { return std::exp(t * t); }, 5, 40, 10.0), ConditioningError);
  }

  // Many probes are checked at once here, so the per-probe band is 4 standard errors.
  TEST_CASE("forward then inverse across modules") {
    RandomSource rng(31);
    const SphereFunction g = testing::random_even_band_limited(rng, 6);
    const auto inv = funk_invert(g, 6);
    const GrassmannFunction phi = as_hyperplane_function(inv.phi);
    const auto probes = quasi_uniform_directions(3, 50);
    for (std::size_t k = 0; k < probes.size(); ++k) {
      const Estimate d = dual_radon(phi, probes[k], 4000, rng.derive(k));
      CHECK(std::abs(d.value - g(probes[k])) <= 4 * d.std_error + 1e-12);
    }
    // Zonal case in R^5: R^* of the inverted profile reproduces it.
    const auto profile = [](double t) { return 1 + 0.3 * (5 * t * t - 1) / 4; };
    const auto zinv = funk_invert_zonal(profile, 5, 8);
    CHECK(zinv.phi.coeffs[2] == doctest::Approx(-1.2).epsilon(1e-12));
    const GrassmannFunction zphi = as_hyperplane_function(zinv.phi);
    for (const auto& t : quasi_uniform_directions(5, 10)) {
      const Estimate d = dual_radon(zphi, t, 4000, rng.derive(1000 + static_cast<std::uint64_t>(1e6 * std::abs(t[1]))));
      CHECK(std::abs(d.value - profile(t[4])) <= 4 * d.std_error + 1e-12);
    }
  }

  TEST_CASE("hyperplane radon inverse") {
    const auto g1 = zonal_analyze([](double t) { return -(std::pow(t, 6) + 0.1); }, 5, 6);
    const auto g = hyperplane_radon_inverse(g1);
    const GrassmannFunction lhs = as_hyperplane_function(g1);
    const SphereFunction gf = as_sphere_function(g);
    const auto q = product_sphere_quadrature(4, 8);
    RandomSource rng(41);
    for (int k = 0; k < 10; ++k) {
      const SubspaceFrame xi = random_subspace(rng, 5, 4);
      CHECK(std::abs(radon(gf, xi, q) - lhs(xi)) < 1e-10);
    }
  }

  TEST_CASE("csv round trip") {
    const auto e = zonal_analyze([](double t) { return t * t; }, 4, 4);
    std::stringstream ss;
    write_expansion_csv(ss, e);
    const auto back = read_expansion_csv(ss, 4, Basis::zonal);
    REQUIRE(back.max_degree == 4);
    for (int k = 0; k <= 4; ++k) CHECK(back.coeffs[k] == e.coeffs[k]);
    std::stringstream bad("nope\n");
    CHECK_THROWS_AS(read_expansion_csv(bad, 3, Basis::zonal), DomainError);
  }
}
