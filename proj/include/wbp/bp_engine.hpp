#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "wbp/estimate.hpp"
#include "wbp/harmonic.hpp"
#include "wbp/radon.hpp"
#include "wbp/starbody.hpp"
#include "wbp/weights.hpp"

namespace wbp {

/// How sphere integrals over S^{n-1} (volumes and their companions) are evaluated.
///
/// Product rules attach a refinement error |I(level) - I(coarse level)|; Monte Carlo rules
/// attach the sample standard error.
struct VolumeRule {
  QuadratureKind kind = QuadratureKind::product_rule;
  int level = 16;
  std::size_t samples = 100000;
};

/// V_u(K ∩ xi) = (R_i b_K)(xi); q is a rule on S^{i-1}.
double section_volume(const StarBody& body, const Weight& u, const SubspaceFrame& xi, const SphereQuadrature& q);

struct SectionSample {
  Mat frame;
  Estimate k;
  Estimate l;
  Verdict verdict = Verdict::indeterminate;  // claim V_u(K∩xi) <= V_u(L∩xi)
};

struct VolumeComparison {
  Estimate k;           // V_v(K)
  Estimate l;           // V_v(L)
  Estimate difference;  // V_v(L) - V_v(K), paired
  Verdict verdict = Verdict::indeterminate;  // claim V_v(K) <= V_v(L)
};

struct ImplicationReport {
  int n = 0;
  int i = 0;
  Admissibility admissibility;
  std::vector<SectionSample> sections;
  int section_level = 0;
  Verdict hypothesis = Verdict::indeterminate;
  double min_section_margin = 0.0;
  VolumeComparison volumes;
  Verdict conclusion = Verdict::not_applicable;
  // Proof diagnostics: int a_K b_K <= int a_K b_L (needs a_K = R^*mu, mu >= 0) and the
  // pointwise inequality V_v(K) - int a_K b_K <= V_v(L) - int a_K b_L.
  Estimate int_ak_bk;
  Estimate int_ak_bl;
  Verdict eeq1 = Verdict::not_applicable;
  Estimate eeq2_margin;  // (V_v(L) - int a_K b_L) - (V_v(K) - int a_K b_K)
  double eeq2_min_pointwise = 0.0;
  Verdict eeq2 = Verdict::indeterminate;
  bool reversal = false;  // hypothesis holds but conclusion fails
  std::uint64_t seed = 0;
  std::vector<std::string> notes;
};

struct ImplicationOptions {
  int n_xi = 256;
  int section_level = 12;
  VolumeRule volume;
  /// Set when a_K = R^*mu with mu >= 0 is known to hold; enables the eeq1 verdict.
  bool representation_verified = false;
  int probe_dirs = 512;
};

/// Samples n_xi uniform subspaces, compares sections, volumes and the proof diagnostics.
ImplicationReport check_implication(const StarBody& k, const StarBody& l, const WeightPair& pair,
                                    const ImplicationOptions& options, const RandomSource& rng);

struct RepresentationReport {
  bool measure = false;
  double max_residual = 0.0;
  double residual_error = 0.0;  // standard error at the worst probe (function candidates)
  double relative_residual = 0.0;
  Verdict verdict = Verdict::indeterminate;
  int probes = 0;
  std::size_t rotations = 0;
  double min_phi = 0.0;  // over sampled subspaces (function candidates) or atom masses (measures)
  bool phi_negative_somewhere = false;
};

/// Default test functions: zonal Gegenbauer polynomials of degree 0, 2, 4 about fixed axes.
std::vector<SphereFunction> default_test_functions(int n, int count = 6);

/// For a measure: max over f of |int a f - (R^*mu, f)|, sphere integrals by a product rule.
RepresentationReport verify_representation(const SphereFunction& a_target, const DiscreteMeasure& mu, int i,
                                           const std::vector<SphereFunction>& test_fns, int sphere_level,
                                           int subsphere_level);

/// For a function: max over probes of |a(theta) - (R^* phi)(theta)|, verdict within 3 standard errors.
RepresentationReport verify_representation(const SphereFunction& a_target, const GrassmannFunction& phi, int probes,
                                           std::size_t rotations, const RandomSource& rng,
                                           std::size_t phi_samples = 20000);

struct LemmaResult {
  bool precondition_ok = true;
  std::string detail;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = true;
};

/// Both sides of the elementary inequality for r^{n-i} alpha/beta nondecreasing on (0, max(a, b)).
LemmaResult lemma_check(const std::function<double(double)>& alpha, const std::function<double(double)>& beta, double a,
                        double b, int n, int i, double tol = 1e-9);

struct CounterexampleParams {
  double delta_min = 0.09817477042468103;  // pi / 32
  double delta_max = 0.7853981633974483;   // pi / 4
  double delta_factor = 0.8;
  double eps0 = 10.0;
  int max_halvings = 8;
  int n_xi = 256;
  std::size_t samples = 100000;
  std::size_t pilot_samples = 20000;
  int cap_grid = 512;
  int cap_probes = 256;
  int max_degree = 64;
  double cond_cap = kDefaultCondCap;
  double floor_fraction = 1e-2;
  std::size_t convexity_pairs = 200000;
  double convexity_tol = 1e-9;
  int section_level = 34;
  /// Multiplies the chosen starting epsilon (values > 1 exercise the convexity guard).
  double epsilon_scale = 1.0;
};

struct CounterexampleResult {
  int n = 0;
  int i = 0;
  std::string base_body;
  std::string weights;
  std::string phi_description;
  Vec cap_center;  // unit normal of the hyperplane xi_0 where phi is most negative
  double cap_radius = 0.0;
  double phi_min = 0.0;
  int bump_power = 0;  // g_1(eta) = -(<eta, eta_0>^{2m} + floor)
  double bump_floor = 0.0;
  HarmonicExpansion g;  // b_K = b_L + eps g
  double g_max_abs = 0.0;
  double epsilon = 0.0;
  int halvings = 0;
  std::optional<StarBody> k;
  Estimate neg_integral;          // (sigma_{n-1}/sigma_{i-1}) int_G g_1 phi = int a_L g
  Estimate neg_integral_direct;   // int a_L g by sphere Monte Carlo
  double max_section_difference = 0.0;  // max over sampled xi of V_u(K∩xi) - V_u(L∩xi)
  double section_identity_residual = 0.0;  // max |difference - eps g_1(xi)|
  std::vector<SectionSample> sections;
  Verdict sections_verdict = Verdict::indeterminate;
  Estimate lemma_term;         // sigma E[F(rho_K) - F(rho_L) - a_L (b_K - b_L)] >= 0
  double lemma_min_pointwise = 0.0;
  Estimate volume_difference;  // V_v(K) - V_v(L) = lemma_term + eps * neg_integral
  Estimate volume_difference_direct;
  Verdict volume_verdict = Verdict::indeterminate;  // claim V_v(K) > V_v(L)
  Estimate eeeq1_margin;  // int a_L b_K - int a_L b_L
  bool convex = false;
  bool convexity_failed = false;
  double convexity_excess = 0.0;
  bool base_convex = false;
  double b_identity_residual = 0.0;
  double representation_residual = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::string> notes;
};

/// Builds K with sections dominated by those of L and V_v(K) > V_v(L), for i = n-1.
///
/// phi must represent a_L through the dual transform. The construction finds a hyperplane
/// xi_0 where phi < 0, puts a nonpositive band-limited bump g_1 on the Grassmannian around it,
/// solves R g = g_1 and sets b_K = b_L + eps g.
CounterexampleResult build_counterexample(const StarBody& l, const WeightPair& pair, const GrassmannFunction& phi,
                                          const CounterexampleParams& params, const RandomSource& rng,
                                          const std::string& phi_description = "supplied");

/// m_gamma with the normalizing constant that makes R^*m_gamma = w_gamma.
double wgamma_constant(int n, int i, double gamma);
GrassmannFunction make_mgamma(int n, int i, double gamma);

struct ScenarioOutcome {
  std::string name;
  std::vector<std::pair<std::string, Verdict>> verdicts;
  std::vector<std::pair<std::string, Estimate>> values;
  std::vector<std::pair<std::string, double>> numbers;
  std::vector<ImplicationReport> implications;
  std::vector<RepresentationReport> representations;
  std::vector<std::string> notes;

  /// holds when every verdict holds or is not applicable; fails if any fails.
  Verdict overall() const;
};

/// Random origin-symmetric test body: an ellipsoid or a positively perturbed ball.
StarBody random_test_body(int n, RandomSource& rng);

/// rho_{A K}(theta) for a positive diagonal A.
StarBody linear_image(const StarBody& body, const Vec& diagonal);
StarBody scaled(const StarBody& body, double factor);

/// Random pairs are rescaled until every sampled section inequality holds with relative slack kPairSlack.
inline constexpr double kPairSlack = 1e-7;

struct RandomPairOptions {
  int trials = 100;
  int n_xi = 256;
  int section_level = 24;
  VolumeRule volume;
};

struct RandomPairSummary {
  int holds = 0;
  int fails = 0;
  int indeterminate = 0;
  int hypothesis_failures = 0;
  std::vector<ImplicationReport> reports;
};

/// K fixed (ball of radius 1); each L is random and scaled up until every sampled section dominates.
RandomPairSummary random_dominating_pairs(const WeightPair& pair, const RandomPairOptions& options,
                                          const RandomSource& rng);

/// L random; K is an anisotropic image of L scaled down until every sampled section is dominated.
RandomPairSummary random_shrunk_pairs(const WeightPair& pair, const RandomPairOptions& options,
                                      const RandomSource& rng);

}  // namespace wbp

namespace wbp {

/// a_K = rho_K^{n-i} for u = v; verifies a candidate representation and runs the implication.
ScenarioOutcome scenario_equal_weights(const StarBody& k, const StarBody& l, const Weight& u, int i,
                                       const ImplicationOptions& options, int probes, std::size_t rotations,
                                       const RandomSource& rng);

/// u = |x|^alpha, v = |x|^beta. When alpha - beta = n - i the implication is checked on random pairs.
ScenarioOutcome scenario_power_weights(int n, int i, double alpha, double beta, const StarBody& k, const StarBody& l,
                                       const ImplicationOptions& options, const RandomPairOptions& pairs,
                                       const RandomSource& rng);

/// Homogeneous u, v with alpha - beta = n - i; checks v = u R^*phi on the sphere for the supplied phi.
ScenarioOutcome scenario_homogeneous(const WeightPair& pair, const GrassmannFunction& phi, const StarBody& k,
                                     const StarBody& l, const ImplicationOptions& options, int probes,
                                     std::size_t rotations, const RandomSource& rng);

/// Certifies R^* m_gamma = w_gamma at probe directions.
ScenarioOutcome scenario_wgamma(int n, int i, double gamma, int probes, std::size_t rotations, const RandomSource& rng);

}  // namespace wbp
