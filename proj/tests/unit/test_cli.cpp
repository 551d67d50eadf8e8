#include <doctest.h>

#include <string>

#include "wbp/cli/config.hpp"
#include "wbp/cli/report.hpp"
#include "wbp/cli/run.hpp"

using namespace wbp;
using namespace wbp::cli;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("minimal config") {
    const ScenarioConfig c = parse_config("n: 3\ni: 2\nscenario: verify-duality\nseed: 42\n");
    CHECK(c.n == 3);
    CHECK(c.i == 2);
    CHECK(c.seed == 42u);
    CHECK(c.scenario == "verify-duality");
    const ScenarioConfig nested = parse_config(
        "space: {n: 4, i: 3}\nrng: {seed: 9}\nscenario: {name: implication, n_xi: 12}\n"
        "bodies:\n  K: {kind: ellipsoid, axes: [1, 2, 3, 4]}\n");
    CHECK(nested.n == 4);
    CHECK(nested.params.n_xi == 12);
    CHECK(nested.k_given);
    CHECK_FALSE(nested.l_given);
    CHECK(nested.k.axes.size() == 4u);
  }

  TEST_CASE("validation errors") {
    CHECK(contains(error_of("n: 3\ni: 3\n"), "space.i"));
    CHECK(contains(error_of("n: 6\ni: 2\n"), "space.n"));
    const std::string kind = error_of("weights:\n  u: {kind: pwoer}\n");
    CHECK(contains(kind, "weights.u.kind"));
    CHECK(contains(kind, "pwoer"));
    CHECK(contains(kind, "power, wgamma, custom"));
    CHECK(contains(error_of("bodies:\n  K: {kind: blob}\n"), "ball, ellipsoid"));
    const std::string unknown = error_of("n: 3\nsamplez: 4\n");
    CHECK(contains(unknown, "samplez"));
    CHECK(contains(unknown, "line 2"));
    CHECK(contains(error_of("scenario: {name: implication, gamma: 2}\n"), "scenario.gamma"));
    CHECK(contains(error_of("scenario: warp\n"), "unknown scenario"));
    CHECK(contains(error_of("n: [3\n"), "line"));
    CHECK(contains(error_of("n: three\n"), "wrong type"));
    CHECK(contains(error_of("weights:\n  u: {kind: custom}\n"), "expression"));
    CHECK(contains(error_of("output: {formats: [pdf]}\n"), "pdf"));
  }

  TEST_CASE("builders") {
    WeightSpec w;
    w.kind = "custom";
    w.expression = "1 + x1^2";
    const Weight u = build_weight(w, 3, 2);
    Vec x(3);
    x << 2.0, 0.0, 0.0;
    CHECK(u(x) == doctest::Approx(5.0));
    BodySpec b;
    b.kind = "zonal";
    b.coefficients = {1.0, 0.0, 0.3};
    const StarBody z = build_body(b, 5);
    CHECK(z.radial(Direction::unit(5, 4)) == doctest::Approx(1.3));
    b.kind = "perturbed";
    b.expression = "0.2 * x1^2";
    b.power = 2;
    CHECK(build_body(b, 3).radial(Direction::unit(3, 0)) == doctest::Approx(std::sqrt(1.2)));
  }

  TEST_CASE("execute verify-duality") {
    ScenarioConfig c = parse_config("n: 3\ni: 2\nscenario: {name: verify-duality, functions: 3, samples: 2000}\nseed: 42\n");
    const RunOutput a = execute(c);
    CHECK(a.report["spec_version"] == 1);
    CHECK(a.report["results"]["functions"].size() == 3u);
    CHECK(a.report["results"]["functions"][0]["lhs"].contains("std_error"));
    CHECK(a.exit_code == 0);
    REQUIRE(a.tables.size() == 1u);
    CHECK(a.tables[0].second.rfind("index,lhs", 0) == 0);
    const RunOutput b = execute(c);
    CHECK(without_timestamp(a.report).dump() == without_timestamp(b.report).dump());
    c.seed = 43;
    CHECK(without_timestamp(execute(c).report).dump() != without_timestamp(a.report).dump());
  }

  TEST_CASE("tiny Monte Carlo budget leaves the conclusion open") {
    const ScenarioConfig c = parse_config(
        "n: 3\ni: 2\nseed: 3\nquadrature: {kind: monte_carlo, samples: 4}\n"
        "bodies:\n  K: {kind: ellipsoid, axes: [1, 1, 0.999]}\n  L: {kind: ball, radius: 1}\n"
        "scenario: {name: implication, n_xi: 16}\n");
    const RunOutput out = execute(c);
    CHECK(out.report["results"]["hypothesis"] == "true");
    CHECK(out.report["results"]["conclusion"] == "indeterminate");
    CHECK(out.exit_code == 2);
  }

  TEST_CASE("csv quoting") {
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  }
}
