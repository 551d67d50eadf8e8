#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "wbp/bp_engine.hpp"
#include "wbp/error.hpp"

using namespace wbp;

namespace {

constexpr double pi = std::numbers::pi;

SubspaceFrame coordinate_plane(int n, std::vector<int> axes) { return SubspaceFrame::coordinate(n, axes); }

StarBody zonal_body(int n, double amplitude) {
  return make_revolution(
      n, [n, amplitude](double angle) { return 1.0 + amplitude * normalized_gegenbauer(n, 2, std::cos(angle)); },
      "zonal");
}

ImplicationOptions quick_options() {
  ImplicationOptions o;
  o.n_xi = 32;
  o.section_level = 12;
  o.volume.level = 12;
  o.probe_dirs = 64;
  return o;
}

}  // namespace

TEST_SUITE("bp-engine") {
  TEST_CASE("section volume examples") {
    const auto q = product_sphere_quadrature(2, 16);
    const Weight one = make_power_weight(3, 0.0);
    RandomSource rng(1);
    for (int k = 0; k < 5; ++k)
      CHECK(section_volume(make_ball(3, 1.0), one, random_subspace(rng, 3, 2), q) == doctest::Approx(pi).epsilon(1e-12));
    CHECK(section_volume(make_ellipsoid({1, 1, 2}), one, coordinate_plane(3, {0, 1}), q) ==
          doctest::Approx(pi).epsilon(1e-12));
    CHECK(section_volume(make_ball(3, 1.0), make_power_weight(3, 1.0), random_subspace(rng, 3, 2), q) ==
          doctest::Approx(2 * pi / 3).epsilon(1e-12));
    // sigma_{i-1} R^{i+alpha} / (i+alpha) in general.
    const double r = 1.3, alpha = -0.5;
    const auto q3 = product_sphere_quadrature(3, 8);
    CHECK(section_volume(make_ball(5, r), make_power_weight(5, alpha), random_subspace(rng, 5, 3), q3) ==
          doctest::Approx(unit_sphere_area(3) * std::pow(r, 3 + alpha) / (3 + alpha)).epsilon(1e-12));
  }

  TEST_CASE("unweighted sections match the radial formula") {
    RandomSource rng(2);
    for (auto [n, i] : {std::pair{3, 2}, std::pair{4, 2}, std::pair{4, 3}, std::pair{5, 4}}) {
      const StarBody body = make_harmonic_perturbed(
          n, [n](const Direction& t) { return 0.2 * t[0] * t[n - 1] + 0.1 * t[1] * t[1]; }, 2.0, "perturbed");
      const auto q = product_sphere_quadrature(i, 14);
      const int ii = i;
      const SphereFunction rho_i{n, [&body, ii](const Direction& t) { return std::pow(body.radial(t), ii); },
                                 Parity::even};
      for (int k = 0; k < 5; ++k) {
        const SubspaceFrame xi = random_subspace(rng, n, i);
        const double expected = radon(rho_i, xi, q) / i;
        CHECK(std::abs(section_volume(body, make_power_weight(n, 0.0), xi, q) - expected) <= 1e-8 * expected);
      }
    }
    CHECK_THROWS_AS(section_volume(make_ball(3, 1), make_power_weight(3, 0), random_subspace(rng, 4, 2),
                                   product_sphere_quadrature(2, 4)),
                    DomainError);
  }

  TEST_CASE("implication on nested balls and identical bodies") {
    const WeightPair pair(make_power_weight(3, 0), make_power_weight(3, 0), 3, 2);
    ImplicationOptions o = quick_options();
    o.representation_verified = true;
    const auto rep = check_implication(make_ball(3, 1.0), make_ball(3, 1.1), pair, o, RandomSource(3));
    CHECK(rep.hypothesis == Verdict::holds);
    CHECK(rep.conclusion == Verdict::holds);
    CHECK(rep.volumes.k.value == doctest::Approx(4 * pi / 3).epsilon(1e-10));
    CHECK(rep.volumes.l.value == doctest::Approx(4 * pi / 3 * std::pow(1.1, 3)).epsilon(1e-10));
    CHECK(rep.sections.size() == 32u);
    CHECK(rep.eeq1 == Verdict::holds);
    CHECK(rep.eeq2 == Verdict::holds);
    CHECK_FALSE(rep.reversal);

    const StarBody e = make_ellipsoid({1.0, 0.8, 1.3});
    const auto same = check_implication(e, e, pair, o, RandomSource(4));
    CHECK(same.hypothesis == Verdict::holds);
    CHECK(same.conclusion == Verdict::holds);
    CHECK(same.min_section_margin == 0.0);
    CHECK(same.volumes.difference.value == 0.0);
    CHECK(std::abs(same.eeq2_margin.value) <= 1e-12);

    // The shrunk body dominates nowhere: hypothesis fails.
    const auto reversed = check_implication(make_ball(3, 1.1), make_ball(3, 1.0), pair, o, RandomSource(5));
    CHECK(reversed.hypothesis == Verdict::fails);
    CHECK(reversed.conclusion == Verdict::fails);
    CHECK_FALSE(reversed.reversal);
  }

  TEST_CASE("implication reports inadmissible weights") {
    // alpha + i > beta + n breaks condition (c).
    const WeightPair pair(make_power_weight(3, 3.0), make_power_weight(3, 0.0), 3, 2);
    const auto rep = check_implication(make_ball(3, 1.0), make_ball(3, 1.1), pair, quick_options(), RandomSource(6));
    CHECK_FALSE(rep.admissibility.all_pass());
    CHECK(rep.conclusion == Verdict::not_applicable);
    CHECK_FALSE(rep.notes.empty());
  }

  TEST_CASE("pointwise lemma diagnostic over random pairs") {
    RandomSource rng(7);
    const WeightPair pair(make_power_weight(3, 0.5), make_power_weight(3, -0.3), 3, 2);
    for (int k = 0; k < 6; ++k) {
      const StarBody a = random_test_body(3, rng);
      const StarBody b = random_test_body(3, rng);
      const auto rep = check_implication(a, b, pair, quick_options(), rng.derive(static_cast<std::uint64_t>(k)));
      CHECK(rep.eeq2 != Verdict::fails);
      CHECK(rep.eeq2_min_pointwise >= -1e-12);
    }
  }

  TEST_CASE("scaling both weights changes no verdict") {
    const Weight u = make_power_weight(3, 0.0);
    const WeightPair pair(u, u, 3, 2);
    const WeightPair scaled_pair(scale_weight(u, 7.5), scale_weight(u, 7.5), 3, 2);
    const StarBody k = make_ellipsoid({1.0, 0.9, 1.1});
    const StarBody l = make_ball(3, 1.2);
    const auto a = check_implication(k, l, pair, quick_options(), RandomSource(8));
    const auto b = check_implication(k, l, scaled_pair, quick_options(), RandomSource(8));
    CHECK(a.hypothesis == b.hypothesis);
    CHECK(a.conclusion == b.conclusion);
    CHECK(a.eeq2 == b.eeq2);
    CHECK(b.volumes.difference.value == doctest::Approx(7.5 * a.volumes.difference.value).epsilon(1e-12));
    for (std::size_t s = 0; s < a.sections.size(); ++s) CHECK(a.sections[s].verdict == b.sections[s].verdict);
  }

  TEST_CASE("representation by a measure") {
    const int n = 3, i = 2;
    const double radius = 1.4;
    const double target = std::pow(radius, n - i);
    RandomSource rng(9);
    DiscreteMeasure mu;
    const int atoms = 4000;
    for (int k = 0; k < atoms; ++k) mu.add(random_subspace(rng, n, i), target / atoms);
    const SphereFunction a{n, [target](const Direction&) { return target; }, Parity::even};
    const auto rep = verify_representation(a, mu, i, default_test_functions(n), 12, 12);
    CHECK(rep.measure);
    CHECK(rep.verdict == Verdict::holds);
    CHECK(rep.min_phi > 0.0);

    // Atoms at three coordinate planes with equal mass reproduce the constant on the first moments only.
    const SphereFunction wrong{n, [](const Direction& t) { return 1.0 + t[0] * t[0]; }, Parity::even};
    CHECK(verify_representation(wrong, mu, i, default_test_functions(n), 12, 12).verdict == Verdict::fails);
    CHECK_THROWS_AS(verify_representation(a, mu, i, {}, 12, 12), DomainError);
  }

  TEST_CASE("representation by a function") {
    const int n = 3, i = 2;
    const GrassmannFunction two{n, i, [](const SubspaceFrame&) { return 2.0; }};
    const SphereFunction a{n, [](const Direction&) { return 2.0; }, Parity::even};
    const auto rep = verify_representation(a, two, 10, 200, RandomSource(10), 500);
    CHECK(rep.verdict == Verdict::holds);
    CHECK(rep.max_residual == 0.0);
    CHECK_FALSE(rep.phi_negative_somewhere);

    // phi = 1 + 3 G2(normal): negative near the pole.
    HarmonicExpansion e = zonal_analyze([](double t) { return 1.0 + 3.0 * normalized_gegenbauer(3, 2, t); }, 3, 2);
    const auto neg = verify_representation(as_sphere_function(funk_invert(e).phi), as_hyperplane_function(e), 4, 200,
                                           RandomSource(11), 2000);
    CHECK(neg.phi_negative_somewhere);
    CHECK(neg.min_phi < 0.0);
    CHECK(neg.min_phi >= -0.5 - 1e-9);
  }

  TEST_CASE("lemma examples") {
    const auto one = [](double) { return 1.0; };
    const LemmaResult equal = lemma_check(one, one, 1.7, 1.7, 3, 2);
    CHECK(equal.pass);
    CHECK(equal.lhs == equal.rhs);
    const LemmaResult hand = lemma_check(one, one, 1.0, 2.0, 3, 2);
    CHECK(hand.pass);
    CHECK(hand.lhs == doctest::Approx(-1.0 / 6).epsilon(1e-12));
    CHECK(hand.rhs == doctest::Approx(2.0 / 3).epsilon(1e-12));
    // r alpha / beta = r exp(-r) decreases past r = 1.
    const LemmaResult bad = lemma_check([](double r) { return std::exp(-r); }, one, 1.0, 3.0, 3, 2);
    CHECK_FALSE(bad.precondition_ok);
    CHECK_FALSE(bad.pass);
    CHECK_THROWS_AS(lemma_check(one, one, 0.0, 1.0, 3, 2), DomainError);
  }

  TEST_CASE("lemma fuzz") {
    RandomSource rng(12);
    int violations = 0;
    for (int k = 0; k < 200; ++k) {
      const auto inst = testing::random_lemma_instance(rng);
      const LemmaResult r = lemma_check(inst.alpha, inst.beta, inst.a, inst.b, inst.n, inst.i);
      CHECK(r.precondition_ok);
      if (!r.pass) ++violations;
    }
    CHECK(violations == 0);
  }

  TEST_CASE("w_gamma constants") {
    CHECK(wgamma_constant(3, 2, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(wgamma_constant(3, 2, 2.0) == doctest::Approx(pi / 2).epsilon(1e-14));
    const GrassmannFunction m1 = make_mgamma(3, 2, 1.0);
    RandomSource rng(13);
    for (int k = 0; k < 5; ++k) CHECK(m1(random_subspace(rng, 3, 2)) == doctest::Approx(1.0).epsilon(1e-14));
    // sin d(e_3, S^2 ∩ xi) is |cos| of the angle between e_3 and the normal.
    const GrassmannFunction m2 = make_mgamma(3, 2, 2.0);
    const Direction normal = random_direction(rng, 3);
    CHECK(m2(SubspaceFrame::hyperplane(normal)) == doctest::Approx(pi / 2 * std::abs(normal[2])).epsilon(1e-12));
    CHECK_THROWS_AS(wgamma_constant(3, 2, 0.0), DomainError);
  }

  TEST_CASE("w_gamma scenario") {
    const auto one = scenario_wgamma(3, 2, 1.0, 5, 50, RandomSource(14));
    CHECK(one.overall() == Verdict::holds);
    const auto two = scenario_wgamma(4, 2, 2.5, 8, 3000, RandomSource(15));
    CHECK(two.overall() != Verdict::fails);
  }

  TEST_CASE("counterexample errors") {
    const StarBody l = zonal_body(5, 0.3);
    const WeightPair pair(make_power_weight(5, 0), make_power_weight(5, 0), 5, 4);
    const GrassmannFunction one{5, 4, [](const SubspaceFrame&) { return 1.0; }};
    CHECK_THROWS_AS(build_counterexample(l, pair, one, {}, RandomSource(16)), NoNegativeRegionError);
    const WeightPair low(make_power_weight(5, 0), make_power_weight(5, 0), 5, 2);
    const GrassmannFunction one2{5, 2, [](const SubspaceFrame&) { return 1.0; }};
    CHECK_THROWS_AS(build_counterexample(l, low, one2, {}, RandomSource(16)), UnsupportedError);
  }

  TEST_CASE("counterexample in R^3") {
    // rho_L = 1 + 0.7 P_2: the Funk preimage 1 - 1.4 P_2 is negative near the poles.
    const StarBody l = zonal_body(3, 0.7);
    const WeightPair pair(make_power_weight(3, 0), make_power_weight(3, 0), 3, 2);
    const auto inv = funk_invert_zonal([](double t) { return 1.0 + 0.7 * normalized_gegenbauer(3, 2, t); }, 3, 2);
    CounterexampleParams p;
    p.samples = 40000;
    p.convexity_pairs = 20000;
    p.n_xi = 64;
    p.section_level = 24;
    const auto r = build_counterexample(l, pair, as_hyperplane_function(inv.phi), p, RandomSource(17));
    REQUIRE(r.k);
    CHECK(r.phi_min == doctest::Approx(-0.4).epsilon(1e-6));
    CHECK(std::abs(std::abs(r.cap_center[2]) - 1.0) < 1e-8);
    CHECK(r.max_section_difference <= 0.0);
    CHECK(r.sections_verdict == Verdict::holds);
    CHECK(r.section_identity_residual < 1e-9);
    CHECK(r.neg_integral.value > 3 * r.neg_integral.std_error);
    CHECK(r.b_identity_residual < 1e-8);
    CHECK(r.volume_verdict == Verdict::holds);
    CHECK(r.volume_difference.value > 3 * r.volume_difference.std_error);
  }

  TEST_CASE("random pairs keep the hypothesis") {
    const WeightPair pair(make_power_weight(3, 1.0), make_power_weight(3, 0.0), 3, 2);
    RandomPairOptions o;
    o.trials = 4;
    o.n_xi = 32;
    o.volume.level = 12;
    const auto shrunk = random_shrunk_pairs(pair, o, RandomSource(18));
    CHECK(shrunk.hypothesis_failures == 0);
    CHECK(shrunk.fails == 0);
    const WeightPair same(make_power_weight(3, 0.0), make_power_weight(3, 0.0), 3, 2);
    const auto dom = random_dominating_pairs(same, o, RandomSource(19));
    CHECK(dom.hypothesis_failures == 0);
    CHECK(dom.fails == 0);
    const WeightPair custom(make_custom(3, "1 + r"), make_power_weight(3, 0.0), 3, 2);
    CHECK_THROWS_AS(random_shrunk_pairs(custom, o, RandomSource(20)), UnsupportedError);
  }

  TEST_CASE("scenarios") {
    const ImplicationOptions o = quick_options();
    const auto eq = scenario_equal_weights(make_ball(3, 1.0), make_ball(3, 1.1), make_power_weight(3, 0), 2, o, 8, 100,
                                           RandomSource(21));
    CHECK(eq.overall() == Verdict::holds);
    const auto pw = scenario_power_weights(3, 2, 4.0, 0.0, make_ball(3, 1.0), make_ball(3, 1.1), o, {},
                                           RandomSource(22));
    CHECK_FALSE(pw.notes.empty());
    const WeightPair hom(make_power_weight(3, 1.0), make_power_weight(3, 0.0), 3, 2);
    const GrassmannFunction one{3, 2, [](const SubspaceFrame&) { return 1.0; }};
    const auto h = scenario_homogeneous(hom, one, make_ball(3, 1.0), make_ball(3, 1.05), o, 6, 50, RandomSource(23));
    CHECK(h.overall() == Verdict::holds);
    const WeightPair mismatch(make_power_weight(3, 0.0), make_power_weight(3, 0.0), 3, 2);
    CHECK_THROWS_AS(scenario_homogeneous(mismatch, one, make_ball(3, 1.0), make_ball(3, 1.05), o, 6, 50,
                                         RandomSource(24)),
                    DomainError);
  }
}
