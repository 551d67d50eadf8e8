#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "wbp/bp_engine.hpp"
#include "wbp/error.hpp"

namespace wbp::cli {

// Malformed or invalid configuration raises wbp::ConfigError naming the field and, for
// syntax errors, the line and column.

struct WeightSpec {
  std::string kind = "power";  // power | wgamma | custom
  double alpha = 0.0;
  double gamma = 1.0;
  std::string expression;
  std::optional<double> degree;
  double scale = 1.0;
};

struct BodySpec {
  std::string kind = "ball";  // ball | ellipsoid | lp | zonal | perturbed | custom
  double radius = 1.0;
  std::vector<double> axes;
  double p = 2.0;
  std::vector<double> coefficients;  // zonal: rho = sum_k c_k G_k(theta_n)
  std::string expression;            // perturbed: h(theta); custom: rho(theta)
  double power = 2.0;                // perturbed: rho = (1 + h)^{1/power}
};

/// Candidate representing function or measure on G_{n,i}.
struct PhiSpec {
  std::string kind = "funk";  // constant | funk | mgamma | zonal | atoms
  double value = 1.0;
  int degree = 8;
  double gamma = 1.0;
  std::vector<double> coefficients;  // zonal in the hyperplane normal (i = n-1)
  int atoms = 2000;
  double mass = 1.0;
};

struct ScenarioParams {
  int functions = 20;
  int max_degree = 8;
  std::size_t samples = 10000;
  int n_xi = 256;
  int section_level = 12;
  int level = 16;
  std::vector<std::vector<double>> basis;
  bool representation_verified = false;
  int probe_dirs = 512;
  PhiSpec phi;
  int probes = 50;
  std::size_t rotations = 10000;
  std::size_t phi_samples = 20000;
  double cond_cap = kDefaultCondCap;
  int great_circle_points = 181;
  double alpha = 1.0;
  double beta = 0.0;
  double gamma = 1.0;
  int trials = 100;
  CounterexampleParams counterexample;
};

struct ScenarioConfig {
  int n = 3;
  int i = 2;
  WeightSpec u;
  WeightSpec v;
  BodySpec k;
  BodySpec l;
  bool k_given = false;
  bool l_given = false;
  VolumeRule quadrature;
  std::uint64_t seed = 42;
  std::string scenario;
  ScenarioParams params;
  std::set<std::string> given_params;
  std::string output_path;
  std::vector<std::string> formats{"json", "csv"};
};

const std::vector<std::string>& scenario_names();
const std::vector<std::string>& weight_kinds();
const std::vector<std::string>& body_kinds();
const std::vector<std::string>& phi_kinds();

/// Parses a YAML document. Top-level shorthands n, i, seed and scenario stand for space.n,
/// space.i, rng.seed and scenario.name. Unknown keys are errors.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

/// Re-checks invariants after flag overrides.
void validate(const ScenarioConfig& config);

/// Effective configuration, echoed into reports.
nlohmann::json to_json(const ScenarioConfig& config);

Weight build_weight(const WeightSpec& spec, int n, int i);
StarBody build_body(const BodySpec& spec, int n);

}  // namespace wbp::cli
