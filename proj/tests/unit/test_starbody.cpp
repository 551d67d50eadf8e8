#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "wbp/error.hpp"
#include "wbp/starbody.hpp"

using namespace wbp;

namespace {

// Dense segment check: the chord between two boundary points stays inside the body.
bool dense_segment_convex(const StarBody& body, int grid, int steps) {
  const auto dirs = quasi_uniform_directions(body.n(), static_cast<std::size_t>(grid));
  for (std::size_t a = 0; a < dirs.size(); ++a)
    for (std::size_t b = a + 1; b < dirs.size(); ++b) {
      const Vec x = body.radial(dirs[a]) * dirs[a].coords();
      const Vec y = body.radial(dirs[b]) * dirs[b].coords();
      for (int s = 1; s < steps; ++s) {
        const Vec z = x + (y - x) * (static_cast<double>(s) / steps);
        if (z.norm() < 1e-12) continue;
        if (z.norm() > body.radial(Direction::from_vector(z)) * (1 + 1e-9)) return false;
      }
    }
  return true;
}

}  // namespace

TEST_SUITE("starbody") {
  TEST_CASE("radial functions") {
    CHECK(make_ball(4, 2.0).radial(Direction::unit(4, 1)) == 2.0);
    const StarBody e = make_ellipsoid({1, 1, 2});
    CHECK(e.radial(Direction::unit(3, 2)) == doctest::Approx(2.0).epsilon(1e-15));
    Vec d(3);
    d << 1, 0, 1;
    CHECK(e.radial(Direction::from_vector(d)) == doctest::Approx(1.0 / std::sqrt(0.625)).epsilon(1e-14));
    CHECK(e.radial(Direction::from_vector(d)) == doctest::Approx(1.264911).epsilon(1e-6));
    CHECK(make_lp_ball(3, 1.0).radial(Direction::from_vector(Vec::Ones(3))) == doctest::Approx(1 / std::sqrt(3.0)));
  }

  TEST_CASE("constructors validate parameters") {
    CHECK_THROWS_AS(make_ball(3, 0.0), InvalidParametersError);
    CHECK_THROWS_AS(make_ellipsoid({1, -1, 2}), InvalidParametersError);
    CHECK_THROWS_AS(make_lp_ball(3, 0.5), InvalidParametersError);
    CHECK_THROWS_AS(make_harmonic_perturbed(3, [](const Direction& t) { return 1.5 * (3 * t[2] * t[2] - 1) - 0.1; }, 1),
                    InvalidParametersError);
    const StarBody rev = make_revolution(3, [](double) { return 1.5; });
    for (const auto& d : quasi_uniform_directions(3, 30)) CHECK(rev.radial(d) == 1.5);
  }

  TEST_CASE("perturbed zonal body in R^5") {
    const StarBody l = make_harmonic_perturbed(
        5, [](const Direction& t) { return 0.3 * (5 * t[4] * t[4] - 1) / 4; }, 1.0);
    double lo = 1e9, hi = -1e9;
    for (const auto& d : quasi_uniform_directions(5, 2000)) {
      lo = std::min(lo, l.radial(d));
      hi = std::max(hi, l.radial(d));
      CHECK(std::abs(l.radial(d) - l.radial(-d)) <= 1e-12);
    }
    CHECK(lo >= 1 - 0.3 / 4 - 1e-12);
    CHECK(hi <= 1.3 + 1e-12);
    CHECK(hi > 1.25);
  }

  TEST_CASE("weighted volumes") {
    const auto q3 = product_sphere_quadrature(3, 8);
    const Weight one = make_power_weight(3, 0.0);
    CHECK(std::abs(weighted_volume(make_ball(3, 1.0), one, q3).value - 4 * std::numbers::pi / 3) < 1e-6);
    CHECK(std::abs(weighted_volume(make_ellipsoid({1, 1, 2}), one, product_sphere_quadrature(3, 30)).value -
                   8 * std::numbers::pi / 3) < 1e-6);
    for (int n = 2; n <= 5; ++n) {
      const double r = 1.3;
      const double exact = unit_sphere_area(n) * std::pow(r, n) / n;
      const double got = weighted_volume(make_ball(n, r), make_power_weight(n, 0.0), product_sphere_quadrature(n, 2)).value;
      CHECK(std::abs(got / exact - 1) < 1e-6);
      const double beta = -0.5;
      const double exact_b = unit_sphere_area(n) * std::pow(r, n + beta) / (n + beta);
      const double got_b =
          weighted_volume(make_ball(n, r), make_custom(n, "r^(-0.5)"), product_sphere_quadrature(n, 2)).value;
      CHECK(std::abs(got_b / exact_b - 1) < 1e-8);
    }
  }

  TEST_CASE("weighted volume is monotone") {
    const auto q = product_sphere_quadrature(3, 10);
    const Weight v = make_power_weight(3, 0.7);
    const StarBody small = make_ellipsoid({0.9, 1.0, 1.1});
    const StarBody big = make_ellipsoid({1.0, 1.0, 1.2});
    for (const auto& node : q.nodes) REQUIRE(small.radial(node) <= big.radial(node));
    CHECK(weighted_volume(small, v, q).value <= weighted_volume(big, v, q).value);
  }

  TEST_CASE("invert_b") {
    const Direction t = Direction::unit(3, 0);
    CHECK(invert_b(0.5, make_power_weight(3, 0.0), t, 2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(invert_b(1.0 / 3, make_power_weight(3, 1.0), t, 2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(invert_b(0.5, make_custom(3, "1"), t, 2) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(invert_b(1.0 / 3, make_custom(3, "r"), t, 2) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK_THROWS_AS(invert_b(0.0, make_power_weight(3, 0.0), t, 2), DomainError);
    CHECK_THROWS_AS(invert_b(1e30, make_custom(3, "1"), t, 2), DivergenceError);
  }

  TEST_CASE("invert_b round trip") {
    const std::vector<Weight> weights = {make_power_weight(3, 0.0), make_power_weight(3, 1.0),
                                         make_power_weight(3, -1.0), make_wgamma(3, 2, 2.0),
                                         make_custom(3, "exp(-r) + 0.5"), make_custom(3, "sqrt(r) * (2 + x3^2/r^2)")};
    const std::vector<StarBody> bodies = {
        make_ball(3, 1.4), make_ellipsoid({0.7, 1.2, 2.0}),
        make_harmonic_perturbed(3, [](const Direction& d) { return 0.4 * (3 * d[2] * d[2] - 1) / 2; }, 2.0)};
    for (const auto& u : weights)
      for (const auto& body : bodies)
        for (const auto& d : quasi_uniform_directions(3, 40)) {
          const double rho = body.radial(d);
          const double back = invert_b(b_function(u, body, d, 2), u, d, 2);
          CHECK(std::abs(back / rho - 1) <= 1e-8);
        }
  }

  TEST_CASE("from-b bodies reproduce their b-function") {
    const Weight u = make_custom(3, "1 + r");
    const auto b = [](const Direction& d) { return 0.4 + 0.1 * d[0] * d[0]; };
    const StarBody k = make_from_b(u, 2, b);
    for (const auto& d : quasi_uniform_directions(3, 30)) CHECK(std::abs(b_function(u, k, d, 2) - b(d)) <= 1e-10);
  }

  TEST_CASE("sampled convexity") {
    RandomSource rng(17);
    CHECK(is_convex_sampled(make_ball(3, 1.0), 20000, 1e-9, rng).pass);
    CHECK(is_convex_sampled(make_ellipsoid({1, 1, 2}), 20000, 1e-9, rng).pass);
    const StarBody wavy = make_harmonic_perturbed(3, [](const Direction& d) { return 0.9 * (2 * d[2] * d[2] - 1); }, 1.0);
    // Independent oracle first: some chord leaves the body.
    REQUIRE_FALSE(dense_segment_convex(wavy, 60, 32));
    const auto verdict = is_convex_sampled(wavy, 20000, 1e-9, rng);
    CHECK_FALSE(verdict.pass);
    CHECK(verdict.witness_a.has_value());
    CHECK(verdict.excess > 1e-9);
    CHECK(dense_segment_convex(make_ellipsoid({1, 1.5, 2}), 40, 16));
  }

  TEST_CASE("radial csv export") {
    std::ostringstream os;
    write_radial_csv(os, make_ball(3, 2.0), {Direction::unit(3, 0)});
    CHECK(os.str() == "x1,x2,x3,rho\n1,0,0,2\n");
  }
}
