#include "wbp/cli/config.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "wbp/expression.hpp"

namespace wbp::cli {

namespace {

using Keys = std::set<std::string>;

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ", ") + s;
  return out;
}

std::string where(const YAML::Node& node) {
  const YAML::Mark m = node.Mark();
  if (m.line < 0) return "";
  std::ostringstream os;
  os << " (line " << m.line + 1 << ", column " << m.column + 1 << ")";
  return os.str();
}

[[noreturn]] void fail(const std::string& field, const std::string& what, const YAML::Node& node) {
  throw ConfigError(field + ": " + what + where(node));
}

void expect_map(const YAML::Node& node, const std::string& field) {
  if (!node.IsMap()) fail(field, "expected a table", node);
}

void check_keys(const YAML::Node& node, const std::string& field, const Keys& allowed) {
  expect_map(node, field);
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) {
      std::vector<std::string> names(allowed.begin(), allowed.end());
      fail(field.empty() ? key : field + "." + key, "unknown key (allowed: " + join(names) + ")", kv.first);
    }
  }
}

template <class T>
T read(const YAML::Node& node, const std::string& field) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail(field, "value has the wrong type", node);
  }
}

template <class T>
void assign(const YAML::Node& parent, const char* key, const std::string& prefix, T& out) {
  if (const YAML::Node n = parent[key]) out = read<T>(n, prefix + key);
}

void one_of(const std::string& value, const std::vector<std::string>& valid, const std::string& field,
            const YAML::Node& node) {
  for (const auto& v : valid)
    if (v == value) return;
  fail(field, "unknown kind '" + value + "' (valid kinds: " + join(valid) + ")", node);
}

WeightSpec parse_weight(const YAML::Node& node, const std::string& field) {
  check_keys(node, field, {"kind", "alpha", "gamma", "expression", "degree", "scale"});
  WeightSpec w;
  assign(node, "kind", field + ".", w.kind);
  one_of(w.kind, weight_kinds(), field + ".kind", node["kind"] ? node["kind"] : node);
  assign(node, "alpha", field + ".", w.alpha);
  assign(node, "gamma", field + ".", w.gamma);
  assign(node, "expression", field + ".", w.expression);
  assign(node, "scale", field + ".", w.scale);
  if (node["degree"]) w.degree = read<double>(node["degree"], field + ".degree");
  if (w.kind == "custom" && w.expression.empty()) fail(field + ".expression", "required for custom weights", node);
  if (!(w.scale > 0.0)) fail(field + ".scale", "must be positive", node);
  return w;
}

BodySpec parse_body(const YAML::Node& node, const std::string& field) {
  check_keys(node, field, {"kind", "radius", "axes", "p", "coefficients", "expression", "power"});
  BodySpec b;
  assign(node, "kind", field + ".", b.kind);
  one_of(b.kind, body_kinds(), field + ".kind", node["kind"] ? node["kind"] : node);
  assign(node, "radius", field + ".", b.radius);
  assign(node, "axes", field + ".", b.axes);
  assign(node, "p", field + ".", b.p);
  assign(node, "coefficients", field + ".", b.coefficients);
  assign(node, "expression", field + ".", b.expression);
  assign(node, "power", field + ".", b.power);
  if ((b.kind == "perturbed" || b.kind == "custom") && b.expression.empty())
    fail(field + ".expression", "required for " + b.kind + " bodies", node);
  if (b.kind == "zonal" && b.coefficients.empty()) fail(field + ".coefficients", "required for zonal bodies", node);
  return b;
}

PhiSpec parse_phi(const YAML::Node& node, const std::string& field) {
  check_keys(node, field, {"kind", "value", "degree", "gamma", "coefficients", "atoms", "mass"});
  PhiSpec p;
  assign(node, "kind", field + ".", p.kind);
  one_of(p.kind, phi_kinds(), field + ".kind", node["kind"] ? node["kind"] : node);
  assign(node, "value", field + ".", p.value);
  assign(node, "degree", field + ".", p.degree);
  assign(node, "gamma", field + ".", p.gamma);
  assign(node, "coefficients", field + ".", p.coefficients);
  assign(node, "atoms", field + ".", p.atoms);
  assign(node, "mass", field + ".", p.mass);
  return p;
}

const std::map<std::string, Keys>& scenario_keys() {
  static const std::map<std::string, Keys> keys{
      {"verify-duality", {"functions", "max_degree", "samples"}},
      {"section-volume", {"n_xi", "level", "basis"}},
      {"implication", {"n_xi", "section_level", "representation_verified", "probe_dirs"}},
      {"representation", {"phi", "probes", "rotations", "phi_samples", "level"}},
      {"counterexample",
       {"phi", "delta_min", "delta_max", "eps0", "max_halvings", "n_xi", "samples", "pilot_samples", "max_degree",
        "epsilon_scale", "section_level", "convexity_pairs", "floor_fraction", "cond_cap", "cap_grid", "cap_probes"}},
      {"funk-invert", {"degree", "cond_cap", "great_circle_points"}},
      {"equal-weights", {"probes", "rotations", "n_xi", "section_level"}},
      {"power-weights", {"alpha", "beta", "trials", "n_xi", "section_level"}},
      {"homogeneous", {"phi", "probes", "rotations", "n_xi", "section_level"}},
      {"wgamma-example", {"gamma", "probes", "rotations"}},
  };
  return keys;
}

void parse_scenario(const YAML::Node& node, ScenarioConfig& c) {
  const auto& table = scenario_keys();
  const auto it = table.find(c.scenario);
  if (it == table.end()) fail("scenario.name", "unknown scenario '" + c.scenario + "' (valid: " + join(scenario_names()) + ")", node);
  Keys allowed = it->second;
  allowed.insert("name");
  check_keys(node, "scenario", allowed);
  auto& p = c.params;
  auto& x = p.counterexample;
  const std::string pre = "scenario.";
  assign(node, "functions", pre, p.functions);
  assign(node, "max_degree", pre, c.scenario == "counterexample" ? x.max_degree : p.max_degree);
  assign(node, "samples", pre, c.scenario == "counterexample" ? x.samples : p.samples);
  assign(node, "n_xi", pre, c.scenario == "counterexample" ? x.n_xi : p.n_xi);
  assign(node, "section_level", pre, c.scenario == "counterexample" ? x.section_level : p.section_level);
  assign(node, "level", pre, p.level);
  assign(node, "basis", pre, p.basis);
  assign(node, "representation_verified", pre, p.representation_verified);
  assign(node, "probe_dirs", pre, p.probe_dirs);
  assign(node, "probes", pre, p.probes);
  assign(node, "rotations", pre, p.rotations);
  assign(node, "phi_samples", pre, p.phi_samples);
  assign(node, "cond_cap", pre, c.scenario == "counterexample" ? x.cond_cap : p.cond_cap);
  assign(node, "degree", pre, p.phi.degree);
  assign(node, "great_circle_points", pre, p.great_circle_points);
  assign(node, "alpha", pre, p.alpha);
  assign(node, "beta", pre, p.beta);
  assign(node, "gamma", pre, p.gamma);
  assign(node, "trials", pre, p.trials);
  assign(node, "delta_min", pre, x.delta_min);
  assign(node, "delta_max", pre, x.delta_max);
  assign(node, "eps0", pre, x.eps0);
  assign(node, "max_halvings", pre, x.max_halvings);
  assign(node, "pilot_samples", pre, x.pilot_samples);
  assign(node, "epsilon_scale", pre, x.epsilon_scale);
  assign(node, "convexity_pairs", pre, x.convexity_pairs);
  assign(node, "floor_fraction", pre, x.floor_fraction);
  assign(node, "cap_grid", pre, x.cap_grid);
  assign(node, "cap_probes", pre, x.cap_probes);
  if (const YAML::Node phi = node["phi"]) p.phi = parse_phi(phi, "scenario.phi");
  for (const auto& kv : node) c.given_params.insert(kv.first.as<std::string>());
}

QuadratureKind parse_quadrature_kind(const std::string& s, const YAML::Node& node) {
  if (s == "product") return QuadratureKind::product_rule;
  if (s == "monte_carlo") return QuadratureKind::monte_carlo;
  fail("quadrature.kind", "unknown kind '" + s + "' (valid kinds: product, monte_carlo)", node);
}

}  // namespace

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"verify-duality", "section-volume", "implication",   "representation",
                                              "counterexample", "funk-invert",    "equal-weights", "power-weights",
                                              "homogeneous",    "wgamma-example"};
  return names;
}

const std::vector<std::string>& weight_kinds() {
  static const std::vector<std::string> kinds{"power", "wgamma", "custom"};
  return kinds;
}

const std::vector<std::string>& body_kinds() {
  static const std::vector<std::string> kinds{"ball", "ellipsoid", "lp", "zonal", "perturbed", "custom"};
  return kinds;
}

const std::vector<std::string>& phi_kinds() {
  static const std::vector<std::string> kinds{"constant", "funk", "mgamma", "zonal", "atoms"};
  return kinds;
}

ScenarioConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    std::ostringstream os;
    os << "syntax error at line " << e.mark.line + 1 << ", column " << e.mark.column + 1 << ": " << e.msg;
    throw ConfigError(os.str());
  }
  if (!root || root.IsNull()) throw ConfigError("config: document is empty");
  check_keys(root, "", {"n", "i", "seed", "scenario", "space", "weights", "bodies", "quadrature", "rng", "output"});

  ScenarioConfig c;
  if (const YAML::Node s = root["space"]) {
    check_keys(s, "space", {"n", "i"});
    assign(s, "n", "space.", c.n);
    assign(s, "i", "space.", c.i);
  }
  assign(root, "n", "", c.n);
  assign(root, "i", "", c.i);
  if (const YAML::Node r = root["rng"]) {
    check_keys(r, "rng", {"seed"});
    assign(r, "seed", "rng.", c.seed);
  }
  assign(root, "seed", "", c.seed);
  if (const YAML::Node w = root["weights"]) {
    check_keys(w, "weights", {"u", "v"});
    if (w["u"]) c.u = parse_weight(w["u"], "weights.u");
    if (w["v"]) c.v = parse_weight(w["v"], "weights.v");
  }
  if (const YAML::Node b = root["bodies"]) {
    check_keys(b, "bodies", {"K", "L"});
    if (b["K"]) {
      c.k = parse_body(b["K"], "bodies.K");
      c.k_given = true;
    }
    if (b["L"]) {
      c.l = parse_body(b["L"], "bodies.L");
      c.l_given = true;
    }
  }
  if (const YAML::Node q = root["quadrature"]) {
    check_keys(q, "quadrature", {"kind", "level", "samples"});
    if (q["kind"]) c.quadrature.kind = parse_quadrature_kind(read<std::string>(q["kind"], "quadrature.kind"), q["kind"]);
    assign(q, "level", "quadrature.", c.quadrature.level);
    assign(q, "samples", "quadrature.", c.quadrature.samples);
  }
  if (const YAML::Node o = root["output"]) {
    check_keys(o, "output", {"path", "formats"});
    assign(o, "path", "output.", c.output_path);
    assign(o, "formats", "output.", c.formats);
  }
  if (const YAML::Node s = root["scenario"]) {
    if (s.IsScalar()) {
      c.scenario = read<std::string>(s, "scenario");
      parse_scenario(YAML::Node(YAML::NodeType::Map), c);
    } else {
      expect_map(s, "scenario");
      if (!s["name"]) fail("scenario.name", "missing", s);
      c.scenario = read<std::string>(s["name"], "scenario.name");
      parse_scenario(s, c);
    }
  }
  validate(c);
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void validate(const ScenarioConfig& c) {
  if (c.n < 2 || c.n > 5) throw ConfigError("space.n: must satisfy 2 <= n <= 5 (got " + std::to_string(c.n) + ")");
  if (c.i < 1 || c.i > c.n - 1)
    throw ConfigError("space.i: must satisfy 1 <= i <= n-1 (got i = " + std::to_string(c.i) +
                      ", n = " + std::to_string(c.n) + ")");
  if (!c.scenario.empty() && !scenario_keys().count(c.scenario))
    throw ConfigError("scenario.name: unknown scenario '" + c.scenario + "' (valid: " + join(scenario_names()) + ")");
  if (c.quadrature.level < 1) throw ConfigError("quadrature.level: must be positive");
  if (c.quadrature.samples < 2) throw ConfigError("quadrature.samples: need at least 2 samples");
  for (const auto& f : c.formats)
    if (f != "json" && f != "csv") throw ConfigError("output.formats: unknown format '" + f + "' (valid: json, csv)");
  if (c.k.kind == "ellipsoid" && c.k_given && static_cast<int>(c.k.axes.size()) != c.n)
    throw ConfigError("bodies.K.axes: need n semi-axes");
  if (c.l.kind == "ellipsoid" && c.l_given && static_cast<int>(c.l.axes.size()) != c.n)
    throw ConfigError("bodies.L.axes: need n semi-axes");
}

nlohmann::json to_json(const ScenarioConfig& c) {
  using nlohmann::json;
  const auto weight = [](const WeightSpec& w) {
    json j{{"kind", w.kind}, {"scale", w.scale}};
    if (w.kind == "power") j["alpha"] = w.alpha;
    if (w.kind == "wgamma") j["gamma"] = w.gamma;
    if (w.kind == "custom") j["expression"] = w.expression;
    if (w.degree) j["degree"] = *w.degree;
    return j;
  };
  const auto body = [](const BodySpec& b) {
    json j{{"kind", b.kind}};
    if (b.kind == "ball") j["radius"] = b.radius;
    if (b.kind == "ellipsoid") j["axes"] = b.axes;
    if (b.kind == "lp") j["p"] = b.p;
    if (b.kind == "zonal") j["coefficients"] = b.coefficients;
    if (b.kind == "perturbed" || b.kind == "custom") j["expression"] = b.expression;
    if (b.kind == "perturbed") j["power"] = b.power;
    return j;
  };
  json params = json::object();
  const auto& p = c.params;
  const auto& x = p.counterexample;
  if (c.scenario == "verify-duality")
    params = {{"functions", p.functions}, {"max_degree", p.max_degree}, {"samples", p.samples}};
  else if (c.scenario == "section-volume")
    params = {{"n_xi", p.n_xi}, {"level", p.level}, {"basis", p.basis}};
  else if (c.scenario == "implication")
    params = {{"n_xi", p.n_xi},
              {"section_level", p.section_level},
              {"representation_verified", p.representation_verified},
              {"probe_dirs", p.probe_dirs}};
  else if (c.scenario == "counterexample")
    params = {{"delta_min", x.delta_min},       {"delta_max", x.delta_max},         {"eps0", x.eps0},
              {"max_halvings", x.max_halvings}, {"n_xi", x.n_xi},                   {"samples", x.samples},
              {"pilot_samples", x.pilot_samples}, {"max_degree", x.max_degree},     {"epsilon_scale", x.epsilon_scale},
              {"section_level", x.section_level}, {"convexity_pairs", x.convexity_pairs},
              {"floor_fraction", x.floor_fraction}, {"cond_cap", x.cond_cap},       {"cap_grid", x.cap_grid},
              {"cap_probes", x.cap_probes},     {"phi_degree", p.phi.degree}};
  else if (c.scenario == "funk-invert")
    params = {{"degree", p.phi.degree}, {"cond_cap", p.cond_cap}, {"great_circle_points", p.great_circle_points}};
  else if (c.scenario == "power-weights")
    params = {{"alpha", p.alpha}, {"beta", p.beta}, {"trials", p.trials}, {"n_xi", p.n_xi},
              {"section_level", p.section_level}};
  else if (c.scenario == "wgamma-example")
    params = {{"gamma", p.gamma}, {"probes", p.probes}, {"rotations", p.rotations}};
  else
    params = {{"probes", p.probes}, {"rotations", p.rotations}, {"n_xi", p.n_xi}, {"section_level", p.section_level}};
  if (c.scenario == "representation" || c.scenario == "homogeneous" || c.scenario == "counterexample")
    params["phi"] = {{"kind", p.phi.kind},   {"value", p.phi.value},   {"degree", p.phi.degree},
                     {"gamma", p.phi.gamma}, {"coefficients", p.phi.coefficients},
                     {"atoms", p.phi.atoms}, {"mass", p.phi.mass}};
  params["name"] = c.scenario;
  return json{{"space", {{"n", c.n}, {"i", c.i}}},
              {"weights", {{"u", weight(c.u)}, {"v", weight(c.v)}}},
              {"bodies", {{"K", body(c.k)}, {"L", body(c.l)}}},
              {"quadrature",
               {{"kind", c.quadrature.kind == QuadratureKind::product_rule ? "product" : "monte_carlo"},
                {"level", c.quadrature.level},
                {"samples", c.quadrature.samples}}},
              {"rng", {{"seed", c.seed}}},
              {"scenario", params},
              {"output", {{"formats", c.formats}}}};
}

Weight build_weight(const WeightSpec& spec, int n, int i) {
  Weight w = spec.kind == "power"    ? make_power_weight(n, spec.alpha)
             : spec.kind == "wgamma" ? make_wgamma(n, i, spec.gamma)
                                     : make_custom(n, spec.expression, spec.degree);
  return spec.scale == 1.0 ? w : scale_weight(w, spec.scale);
}

StarBody build_body(const BodySpec& spec, int n) {
  if (spec.kind == "ball") return make_ball(n, spec.radius);
  if (spec.kind == "ellipsoid") return make_ellipsoid(spec.axes);
  if (spec.kind == "lp") return make_lp_ball(n, spec.p);
  if (spec.kind == "zonal") {
    const std::vector<double> c = spec.coefficients;
    const int top = static_cast<int>(c.size()) - 1;
    std::ostringstream os;
    os << "zonal body, Gegenbauer coefficients";
    for (double v : c) os << " " << v;
    return make_revolution(
        n,
        [c, n, top](double angle) {
          const auto g = normalized_gegenbauer_all(n, top, std::cos(angle));
          double s = 0.0;
          for (int k = 0; k <= top; ++k) s += c[static_cast<std::size_t>(k)] * g[static_cast<std::size_t>(k)];
          return s;
        },
        os.str());
  }
  const Expression e = Expression::parse(spec.expression, n);
  if (spec.kind == "perturbed")
    return make_harmonic_perturbed(
        n, [e](const Direction& t) { return e(t.coords()); }, spec.power, "perturbed ball, h = " + spec.expression);
  return StarBody(
      n, [e](const Direction& t) { return e(t.coords()); }, BodyKind::custom, false, "custom, rho = " + spec.expression);
}

}  // namespace wbp::cli
