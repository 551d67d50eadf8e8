#include <doctest.h>

#include <cmath>

#include "wbp/error.hpp"
#include "wbp/expression.hpp"
#include "wbp/starbody.hpp"
#include "wbp/weights.hpp"

using namespace wbp;

namespace {

Vec vec3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

}  // namespace

TEST_SUITE("weights") {
  TEST_CASE("power weights") {
    CHECK(make_power_weight(3, 0.0)(vec3(0.3, 2, 1)) == 1.0);
    CHECK(make_power_weight(3, 1.0)(vec3(3, 4, 0)) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(make_power_weight(3, -1.0)(vec3(0.5, 0, 0)) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(*make_power_weight(3, 2.5).degree == 2.5);
  }

  TEST_CASE("w_gamma") {
    const Weight one = make_wgamma(4, 2, 2.0);
    CHECK(one(Vec::Unit(4, 3)) == 1.0);
    const Weight w = make_wgamma(3, 2, 2.0);
    CHECK(w(vec3(1, 0, 0)) == doctest::Approx(1.0));
    CHECK(w(vec3(0, 0, 1)) == doctest::Approx(0.0));
    RandomSource rng(1);
    for (int k = 0; k < 100; ++k) {
      Vec x = Vec::NullaryExpr(3, [&] { return rng.normal(); });
      CHECK(std::abs(w(x) - w(-x)) <= 1e-12);
      const double t = 0.5 + 1.5 * rng.uniform();
      CHECK(std::abs(w(t * x) - w(x)) <= 1e-10 * w(x));
    }
    CHECK_THROWS_AS(make_wgamma(3, 2, 0.0), DomainError);
  }

  TEST_CASE("custom expressions") {
    const Weight w = make_custom(3, "exp(-r) * (1 + x3^2) / pow(rp + 1, 2)");
    const Vec x = vec3(0.3, -0.4, 1.2);
    const double r = x.norm(), rp = 0.5;
    CHECK(w(x) == doctest::Approx(std::exp(-r) * (1 + 1.44) / std::pow(rp + 1, 2)));
    CHECK(make_custom(3, "-2^2")(x) == -4.0);
    CHECK(make_custom(3, "2*pi")(x) == doctest::Approx(6.283185307179586));
    CHECK_THROWS_AS(make_custom(3, "x4"), DomainError);
    CHECK_THROWS_AS(make_custom(3, "r +"), DomainError);
    CHECK_THROWS_AS(make_custom(3, "foo(r)"), DomainError);
  }

  TEST_CASE("conditions for equal weights") {
    const Weight one = make_power_weight(4, 0.0);
    const auto adm = check_conditions(WeightPair(one, one, 4, 2), 64, 200);
    CHECK(adm.a.pass);
    CHECK(adm.b.pass);
    CHECK(adm.c.pass);
  }

  TEST_CASE("power weight region agrees with closed form") {
    const int n = 3, i = 2;
    int checked = 0;
    for (int a = 0; a < 20; ++a)
      for (int b = 0; b < 20; ++b) {
        const double alpha = -2.95 + 0.3 * a;
        const double beta = -2.95 + 0.31 * b;
        const WeightPair pair(make_power_weight(n, alpha), make_power_weight(n, beta), n, i);
        const auto adm = check_conditions(pair, 16, 200);
        const bool expected = alpha + i > 0 && alpha + i <= beta + n;
        CHECK_MESSAGE(adm.all_pass() == expected, "alpha=", alpha, " beta=", beta);
        ++checked;
      }
    CHECK(checked == 400);
  }

  TEST_CASE("comparison condition failure has a witness") {
    const int n = 3, i = 2;
    const WeightPair pair(make_power_weight(n, 0.0), make_custom(n, "exp(-r)"), n, i);
    const auto adm = check_conditions(pair, 32, 200);
    CHECK(adm.a.pass);
    CHECK(adm.b.pass);
    REQUIRE_FALSE(adm.c.pass);
    REQUIRE(adm.c.witness_direction.has_value());
    // r e^{-r} peaks at r = 1, so the first decrease straddles it.
    CHECK(adm.c.witness_r1 > 0.9);
    CHECK(adm.c.witness_r2 > 1.0);
    CHECK(adm.c.witness_r2 < 1.1);
  }

  TEST_CASE("b-function") {
    const StarBody ball = make_ball(3, 1.0);
    const Direction t = Direction::unit(3, 0);
    CHECK(b_function(make_power_weight(3, 0.0), ball, t, 2) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(b_function(make_power_weight(3, 1.0), ball, t, 2) == doctest::Approx(1.0 / 3).epsilon(1e-14));
    CHECK(b_function(make_power_weight(3, -1.0), ball, t, 2) == doctest::Approx(1.0).epsilon(1e-14));
    // Same quantities through the numeric (non-homogeneous) path.
    CHECK(b_function(make_custom(3, "1/r"), ball, t, 2) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(b_function(make_custom(3, "r"), ball, t, 2) == doctest::Approx(1.0 / 3).epsilon(1e-12));
    const Weight radial = make_custom(3, "exp(-r)");
    const StarBody big = make_ball(3, 1.7);
    const double ref = b_function(radial, big, t, 2);
    for (const auto& d : quasi_uniform_directions(3, 50)) CHECK(std::abs(b_function(radial, big, d, 2) - ref) <= 1e-9);
  }

  TEST_CASE("comparison function") {
    const Weight one = make_power_weight(5, 0.0);
    const WeightPair eq(one, one, 5, 4);
    CHECK(comparison_function(eq, make_ball(5, 2.0), Direction::unit(5, 0)) == doctest::Approx(2.0));

    const WeightPair pw(make_power_weight(3, 0.5), make_power_weight(3, 1.25), 3, 2);
    const StarBody ell = make_ellipsoid({1.0, 1.3, 0.7});
    for (const auto& d : quasi_uniform_directions(3, 20)) {
      const double rho = ell.radial(d);
      CHECK(comparison_function(pw, ell, d) == doctest::Approx(std::pow(rho, 1.25 + 3 - 0.5 - 2)).epsilon(1e-13));
      CHECK(comparison_function(pw, ell, d) == doctest::Approx(comparison_function(pw, ell, -d)).epsilon(1e-13));
    }

    // alpha - beta = n - i: a_K = v/u on the sphere, for any body.
    const Weight u = make_product(make_power_weight(3, 1.0), make_wgamma(3, 2, 2.0));
    const Weight v = make_power_weight(3, 0.0);
    const WeightPair hom(u, v, 3, 2);
    for (const auto& d : quasi_uniform_directions(3, 20)) {
      const double a1 = comparison_function(hom, make_ball(3, 1.0), d);
      const double a7 = comparison_function(hom, make_ball(3, 7.0), d);
      CHECK(std::abs(a1 - a7) <= 1e-10 * std::abs(a1));
    }
    const WeightPair zero_u(make_wgamma(3, 2, 2.0), v, 3, 2);
    CHECK_THROWS_AS(comparison_function(zero_u, make_ball(3, 1.0), Direction::unit(3, 2)), DivisionError);
  }
}
