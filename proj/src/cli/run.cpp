#include "wbp/cli/run.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <variant>

#include "wbp/cli/report.hpp"
#include "wbp/error.hpp"

namespace wbp::cli {

using nlohmann::json;

namespace {

struct Context {
  const ScenarioConfig& c;
  RandomSource rng;
  RunOutput out;
  std::vector<Verdict> verdicts;

  void decide(Verdict v) { verdicts.push_back(v); }
  void table(const std::string& name, const std::string& text) { out.tables.emplace_back(name, text); }
};

BodySpec ball(double r) {
  BodySpec b;
  b.radius = r;
  return b;
}

BodySpec zonal_default() {
  BodySpec b;
  b.kind = "zonal";
  b.coefficients = {1.0, 0.0, 0.3};
  return b;
}

WeightPair weight_pair(const ScenarioConfig& c) {
  return WeightPair(build_weight(c.u, c.n, c.i), build_weight(c.v, c.n, c.i), c.n, c.i);
}

SphereFunction comparison(const WeightPair& pair, const StarBody& body) {
  return SphereFunction{pair.n, [pair, body](const Direction& t) { return comparison_function(pair, body, t); },
                        Parity::even};
}

/// Funk preimage of a target on S^{n-1} (i = n-1): full analysis on S^2, zonal about e_n otherwise.
FunkInversion funk_preimage(const SphereFunction& target, const BodySpec& body, int degree, double cond_cap) {
  if (target.n == 3) return funk_invert(target, degree, cond_cap);
  if (body.kind != "zonal" && body.kind != "ball")
    throw UnsupportedError("Funk inversion for n > 3 needs a body of revolution about e_n (kind zonal or ball)");
  const int n = target.n;
  return funk_invert_zonal(
      [target, n](double t) {
        Vec x = Vec::Zero(n);
        x[n - 1] = t;
        x[0] = std::sqrt(std::max(0.0, 1.0 - t * t));
        return target(Direction::from_vector(x));
      },
      n, degree, cond_cap);
}

using Candidate = std::variant<GrassmannFunction, DiscreteMeasure>;

Candidate build_candidate(const PhiSpec& spec, const ScenarioConfig& c, const SphereFunction& target,
                          const BodySpec& body, RandomSource& rng, std::string& description) {
  const int n = c.n, i = c.i;
  if (spec.kind == "constant") {
    const double v = spec.value;
    description = "constant " + std::to_string(v);
    return GrassmannFunction{n, i, [v](const SubspaceFrame&) { return v; }};
  }
  if (spec.kind == "mgamma") {
    description = "m_gamma, gamma = " + std::to_string(spec.gamma);
    return make_mgamma(n, i, spec.gamma);
  }
  if (spec.kind == "atoms") {
    DiscreteMeasure mu;
    for (int k = 0; k < spec.atoms; ++k) mu.add(random_subspace(rng, n, i), spec.mass / spec.atoms);
    description = std::to_string(spec.atoms) + " uniform random atoms, total mass " + std::to_string(spec.mass);
    return mu;
  }
  if (i != n - 1) throw UnsupportedError("phi kind '" + spec.kind + "' needs i = n-1");
  if (spec.kind == "zonal") {
    HarmonicExpansion e;
    e.n = n;
    e.basis = Basis::zonal;
    e.max_degree = static_cast<int>(spec.coefficients.size()) - 1;
    e.coeffs = spec.coefficients;
    e.axis = Vec::Unit(n, n - 1);
    description = "zonal in the hyperplane normal";
    return as_hyperplane_function(e);
  }
  const FunkInversion inv = funk_preimage(target, body, spec.degree, c.params.cond_cap);
  description = "Funk inversion of the target at degree " + std::to_string(spec.degree);
  return as_hyperplane_function(inv.phi);
}

ImplicationOptions implication_options(const ScenarioConfig& c) {
  ImplicationOptions o;
  o.n_xi = c.params.n_xi;
  o.section_level = c.params.section_level;
  o.volume = c.quadrature;
  o.representation_verified = c.params.representation_verified;
  o.probe_dirs = c.params.probe_dirs;
  return o;
}

std::string sections_csv(const std::vector<SectionSample>& s) {
  std::ostringstream os;
  write_sections_csv(os, s);
  return os.str();
}

std::string great_circle_csv(const GrassmannFunction& phi, int points) {
  const int n = phi.n;
  std::ostringstream os;
  write_great_circle_csv(os, phi, Vec::Unit(n, n - 1), Vec::Unit(n, 0), points);
  return os.str();
}

std::string radial_csv(const StarBody& body, int points) {
  const int n = body.n();
  std::vector<Direction> dirs;
  for (int k = 0; k < points; ++k) {
    const double t = std::numbers::pi * k / std::max(1, points - 1);
    dirs.push_back(Direction::from_vector(std::cos(t) * Vec::Unit(n, n - 1) + std::sin(t) * Vec::Unit(n, 0)));
  }
  std::ostringstream os;
  write_radial_csv(os, body, dirs);
  return os.str();
}

void verify_duality(Context& x) {
  const auto& c = x.c;
  const auto& p = c.params;
  const auto q = product_sphere_quadrature(c.i, c.quadrature.level);
  json rows = json::array();
  std::ostringstream csv;
  csv << std::setprecision(17) << "index,lhs,lhs_std_error,rhs,rhs_std_error,residual,combined_std_error,verdict\r\n";
  for (int j = 0; j < p.functions; ++j) {
    RandomSource fr = x.rng.derive(static_cast<std::uint64_t>(j));
    const SphereFunction f = random_even_band_limited(c.n, p.max_degree, fr);
    const GrassmannFunction phi = random_smooth_grassmann(c.n, c.i, fr);
    const DualityReport d = duality_residual(f, phi, q, p.samples, x.rng.derive(1000 + static_cast<std::uint64_t>(j)));
    rows.push_back(to_json(d));
    x.decide(d.verdict);
    csv << j << "," << d.lhs.value << "," << d.lhs.std_error << "," << d.rhs.value << "," << d.rhs.std_error << ","
        << d.residual << "," << d.combined_error << "," << to_string(d.verdict) << "\r\n";
  }
  x.out.report["results"] = {{"functions", rows}, {"subsphere_level", c.quadrature.level}};
  x.table("duality.csv", csv.str());
}

void section_volumes(Context& x) {
  const auto& c = x.c;
  const StarBody k = build_body(c.k, c.n);
  const Weight u = build_weight(c.u, c.n, c.i);
  std::vector<SubspaceFrame> frames;
  if (!c.params.basis.empty()) {
    Mat m(c.n, static_cast<Eigen::Index>(c.params.basis.size()));
    for (std::size_t col = 0; col < c.params.basis.size(); ++col) {
      if (static_cast<int>(c.params.basis[col].size()) != c.n)
        throw ConfigError("scenario.basis: every vector needs n entries");
      for (int r = 0; r < c.n; ++r) m(r, static_cast<Eigen::Index>(col)) = c.params.basis[col][static_cast<std::size_t>(r)];
    }
    if (m.cols() != c.i) throw ConfigError("scenario.basis: need exactly i vectors");
    frames.push_back(SubspaceFrame::span(m));
  } else {
    RandomSource r = x.rng.derive(0);
    for (int s = 0; s < c.params.n_xi; ++s) frames.push_back(random_subspace(r, c.n, c.i));
  }
  const auto fine = product_sphere_quadrature(c.i, c.params.level);
  const auto coarse = product_sphere_quadrature(c.i, std::max(1, c.params.level - 2));
  json rows = json::array();
  std::ostringstream csv;
  csv << std::setprecision(17) << "index,frame,section,std_error\r\n";
  for (std::size_t s = 0; s < frames.size(); ++s) {
    Estimate e;
    e.value = section_volume(k, u, frames[s], fine);
    e.std_error = std::abs(e.value - section_volume(k, u, frames[s], coarse));
    e.samples = fine.size();
    e.error_kind = Estimate::ErrorKind::quadrature_refinement;
    json frame = json::array();
    std::ostringstream f;
    f << std::setprecision(17);
    for (Eigen::Index col = 0; col < frames[s].columns().cols(); ++col) {
      json v = json::array();
      for (Eigen::Index r = 0; r < c.n; ++r) {
        v.push_back(frames[s].columns()(r, col));
        f << (r + col ? " " : "") << frames[s].columns()(r, col);
      }
      frame.push_back(v);
    }
    rows.push_back({{"frame", frame}, {"section", to_json(e)}});
    csv << s << "," << csv_field(f.str()) << "," << e.value << "," << e.std_error << "\r\n";
  }
  x.out.report["results"] = {{"body", k.description()}, {"weight", u.description}, {"sections", rows}};
  x.table("sections.csv", csv.str());
}

void implication(Context& x) {
  const auto& c = x.c;
  const StarBody k = build_body(c.k, c.n);
  const StarBody l = build_body(c.l, c.n);
  const ImplicationReport r = check_implication(k, l, weight_pair(c), implication_options(c), x.rng);
  x.decide(r.hypothesis);
  x.decide(r.conclusion);
  x.decide(r.eeq2);
  x.out.report["results"] = to_json(r, false);
  x.table("sections.csv", sections_csv(r.sections));
}

void representation(Context& x) {
  const auto& c = x.c;
  const BodySpec body = c.k;
  const StarBody k = build_body(body, c.n);
  const WeightPair pair = weight_pair(c);
  const SphereFunction target = comparison(pair, k);
  RandomSource atoms_rng = x.rng.derive(1);
  std::string description;
  const Candidate cand = build_candidate(c.params.phi, c, target, body, atoms_rng, description);
  RepresentationReport rep;
  if (const auto* phi = std::get_if<GrassmannFunction>(&cand)) {
    rep = verify_representation(target, *phi, c.params.probes, c.params.rotations, x.rng.derive(0), c.params.phi_samples);
    if (c.i == c.n - 1) x.table("phi_great_circle.csv", great_circle_csv(*phi, c.params.great_circle_points));
  } else {
    rep = verify_representation(target, std::get<DiscreteMeasure>(cand), c.i, default_test_functions(c.n),
                                c.params.level, c.params.level);
  }
  x.decide(rep.verdict);
  x.out.report["results"] = to_json(rep);
  x.out.report["results"]["candidate_description"] = description;
  x.out.report["results"]["target"] = "comparison function of " + k.description();
}

void counterexample(Context& x) {
  const auto& c = x.c;
  const BodySpec body = c.l;
  const StarBody l = build_body(body, c.n);
  const WeightPair pair = weight_pair(c);
  const PhiSpec& spec = c.params.phi;
  RandomSource atoms_rng = x.rng.derive(99);
  std::string description;
  const Candidate cand = build_candidate(spec, c, comparison(pair, l), body, atoms_rng, description);
  const auto* phi = std::get_if<GrassmannFunction>(&cand);
  if (!phi) throw UnsupportedError("counterexample: phi must be a function, not a measure");
  const CounterexampleResult r = build_counterexample(l, pair, *phi, c.params.counterexample, x.rng, description);
  x.decide(r.sections_verdict);
  x.decide(r.volume_verdict);
  x.out.report["results"] = to_json(r, false);
  x.table("sections.csv", sections_csv(r.sections));
  x.table("radial_l.csv", radial_csv(l, 181));
  if (r.k) x.table("radial_k.csv", radial_csv(*r.k, 181));
  x.table("phi_great_circle.csv", great_circle_csv(*phi, 181));
}

void funk_inversion(Context& x) {
  const auto& c = x.c;
  if (c.i != c.n - 1) throw DomainError("funk-invert: needs i = n-1");
  const BodySpec body = c.k;
  const StarBody k = build_body(body, c.n);
  const WeightPair pair = weight_pair(c);
  const SphereFunction target = comparison(pair, k);
  const FunkInversion inv = funk_preimage(target, body, c.params.phi.degree, c.params.cond_cap);

  // Forward check: multiply back and compare with the target on probe directions.
  HarmonicExpansion forward = inv.phi;
  for (std::size_t idx = 0; idx < forward.coeffs.size(); ++idx) {
    const int degree = forward.basis == Basis::zonal ? static_cast<int>(idx)
                                                      : static_cast<int>(std::floor(std::sqrt(static_cast<double>(idx))));
    forward.coeffs[idx] = degree % 2 ? 0.0 : forward.coeffs[idx] * funk_multiplier(c.n, degree);
  }
  double residual = 0.0;
  for (const auto& t : quasi_uniform_directions(c.n, 200)) residual = std::max(residual, std::abs(target(t) - forward(t)));
  json multipliers = json::array();
  for (int kdeg = 0; kdeg <= c.params.phi.degree; kdeg += 2) multipliers.push_back(funk_multiplier(c.n, kdeg));
  x.out.report["results"] = {{"target", "comparison function of " + k.description()},
                             {"degree", c.params.phi.degree},
                             {"even_multipliers", multipliers},
                             {"max_amplification", inv.max_amplification},
                             {"tail_energy", inv.tail_energy},
                             {"truncation_residual", residual},
                             {"phi_min_on_great_circle", nullptr}};
  const GrassmannFunction phi = as_hyperplane_function(inv.phi);
  double lo = std::numeric_limits<double>::infinity();
  for (int s = 0; s < c.params.great_circle_points; ++s) {
    const double t = std::numbers::pi * s / std::max(1, c.params.great_circle_points - 1);
    lo = std::min(lo, phi(SubspaceFrame::hyperplane(
                           Direction::from_vector(std::cos(t) * Vec::Unit(c.n, c.n - 1) + std::sin(t) * Vec::Unit(c.n, 0)))));
  }
  x.out.report["results"]["phi_min_on_great_circle"] = lo;
  std::ostringstream coeffs;
  write_expansion_csv(coeffs, inv.phi);
  x.table("phi_coefficients.csv", coeffs.str());
  x.table("phi_great_circle.csv", great_circle_csv(phi, c.params.great_circle_points));
}

void scenario(Context& x) {
  const auto& c = x.c;
  const auto& p = c.params;
  ImplicationOptions io = implication_options(c);
  ScenarioOutcome s;
  if (c.scenario == "equal-weights") {
    const StarBody k = build_body(c.k, c.n);
    const StarBody l = build_body(c.l, c.n);
    s = scenario_equal_weights(k, l, build_weight(c.u, c.n, c.i), c.i, io, p.probes, p.rotations, x.rng);
  } else if (c.scenario == "power-weights") {
    const StarBody k = build_body(c.k, c.n);
    const StarBody l = build_body(c.l, c.n);
    RandomPairOptions pairs;
    pairs.trials = p.trials;
    pairs.n_xi = p.n_xi;
    pairs.section_level = std::max(p.section_level, 24);
    pairs.volume = c.quadrature;
    s = scenario_power_weights(c.n, c.i, p.alpha, p.beta, k, l, io, pairs, x.rng);
  } else if (c.scenario == "homogeneous") {
    const BodySpec kb = c.k;
    const StarBody k = build_body(kb, c.n);
    const StarBody l = build_body(c.l, c.n);
    const WeightPair pair = weight_pair(c);
    const SphereFunction ratio{c.n, [pair](const Direction& t) { return pair.v(t.coords()) / pair.u(t.coords()); },
                               Parity::even};
    const PhiSpec& spec = p.phi;
    RandomSource atoms_rng = x.rng.derive(99);
    std::string description;
    const Candidate cand = build_candidate(spec, c, ratio, kb, atoms_rng, description);
    const auto* phi = std::get_if<GrassmannFunction>(&cand);
    if (!phi) throw UnsupportedError("homogeneous: phi must be a function, not a measure");
    s = scenario_homogeneous(pair, *phi, k, l, io, p.probes, p.rotations, x.rng);
    s.notes.push_back("phi: " + description);
  } else {
    s = scenario_wgamma(c.n, c.i, p.gamma, p.probes, p.rotations, x.rng);
  }
  for (const auto& [name, v] : s.verdicts) x.decide(v);
  x.out.report["results"] = to_json(s);
  for (std::size_t r = 0; r < s.implications.size(); ++r)
    x.table("sections_" + std::to_string(r) + ".csv", sections_csv(s.implications[r].sections));
}

ScenarioConfig with_defaults(ScenarioConfig c) {
  if (!c.k_given) c.k = ball(1.0);
  if (!c.l_given) c.l = c.scenario == "counterexample" ? zonal_default() : ball(1.1);
  c.k_given = c.l_given = true;
  if (c.scenario == "homogeneous" && !c.given_params.count("phi")) c.params.phi.kind = "constant";
  return c;
}

}  // namespace

RunOutput execute(const ScenarioConfig& given) {
  validate(given);
  if (given.scenario.empty()) throw ConfigError("scenario.name: missing");
  const ScenarioConfig config = with_defaults(given);
  Context x{config, RandomSource(config.seed), {}, {}};
  x.out.report = envelope(config.scenario, to_json(config), config.seed);
  const std::string& s = config.scenario;
  if (s == "verify-duality") verify_duality(x);
  else if (s == "section-volume") section_volumes(x);
  else if (s == "implication") implication(x);
  else if (s == "representation") representation(x);
  else if (s == "counterexample") counterexample(x);
  else if (s == "funk-invert") funk_inversion(x);
  else scenario(x);
  bool open = false;
  for (Verdict v : x.verdicts) open = open || v == Verdict::indeterminate;
  x.out.exit_code = open ? 2 : 0;
  json verdicts = json::array();
  for (Verdict v : x.verdicts) verdicts.push_back(to_string(v));
  x.out.report["verdicts"] = verdicts;
  x.out.report["exit_code"] = x.out.exit_code;
  return std::move(x.out);
}

std::string default_output_dir() {
  const char* env = std::getenv("WBP_OUT_DIR");
  return env && *env ? env : "wbp_out";
}

int run(const ScenarioConfig& config, std::ostream& log) {
  try {
    RunOutput out = execute(config);
    const std::filesystem::path dir = config.output_path.empty() ? default_output_dir() : config.output_path;
    std::filesystem::create_directories(dir);
    const auto has = [&](const char* f) {
      return std::find(config.formats.begin(), config.formats.end(), f) != config.formats.end();
    };
    if (has("json")) {
      std::ofstream(dir / (config.scenario + ".json")) << out.report.dump(2) << "\n";
      log << "wrote " << (dir / (config.scenario + ".json")).string() << "\n";
    }
    if (has("csv"))
      for (const auto& [name, text] : out.tables) {
        std::ofstream(dir / (config.scenario + "_" + name)) << text;
        log << "wrote " << (dir / (config.scenario + "_" + name)).string() << "\n";
      }
    json verdicts = out.report["verdicts"];
    log << config.scenario << ": " << verdicts.dump() << " -> exit " << out.exit_code << "\n";
    return out.exit_code;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace wbp::cli
