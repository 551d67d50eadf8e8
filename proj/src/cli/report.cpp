#include "wbp/cli/report.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace wbp::cli {

const char* const kArtifactVersion = "0.1.0";

using nlohmann::json;

namespace {

// JSON has no infinities; they only arise as "no data" sentinels.
json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json vec(const Vec& v) {
  json a = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(v[k]);
  return a;
}

json verdict(Verdict v) { return to_string(v); }

json sections(const std::vector<SectionSample>& s) {
  json a = json::array();
  for (const auto& x : s)
    a.push_back({{"k", to_json(x.k)}, {"l", to_json(x.l)}, {"verdict", verdict(x.verdict)}});
  return a;
}

}  // namespace

json to_json(const Estimate& e) {
  return {{"value", number(e.value)},
          {"std_error", number(e.std_error)},
          {"samples", e.samples},
          {"error_kind", to_string(e.error_kind)}};
}

json to_json(const Admissibility& a) {
  const auto cond = [](const ConditionVerdict& c) {
    json j{{"pass", c.pass}, {"detail", c.detail}};
    if (c.witness_direction) {
      j["witness_direction"] = vec(c.witness_direction->coords());
      j["r1"] = c.witness_r1;
      j["r2"] = c.witness_r2;
    }
    return j;
  };
  return {{"a", cond(a.a)},
          {"b", cond(a.b)},
          {"c", cond(a.c)},
          {"probe_directions", a.probe_dirs},
          {"radial_grid", a.r_grid},
          {"all_pass", a.all_pass()}};
}

json to_json(const ImplicationReport& r, bool include_sections) {
  json j{{"space", {{"n", r.n}, {"i", r.i}}},
         {"admissibility", to_json(r.admissibility)},
         {"sampled_subspaces", r.sections.size()},
         {"section_level", r.section_level},
         {"hypothesis", verdict(r.hypothesis)},
         {"min_section_margin", number(r.min_section_margin)},
         {"volume_k", to_json(r.volumes.k)},
         {"volume_l", to_json(r.volumes.l)},
         {"volume_difference_l_minus_k", to_json(r.volumes.difference)},
         {"conclusion", verdict(r.conclusion)},
         {"int_ak_bk", to_json(r.int_ak_bk)},
         {"int_ak_bl", to_json(r.int_ak_bl)},
         {"eeq1", verdict(r.eeq1)},
         {"eeq2_margin", to_json(r.eeq2_margin)},
         {"eeq2_min_pointwise", number(r.eeq2_min_pointwise)},
         {"eeq2", verdict(r.eeq2)},
         {"reversal", r.reversal},
         {"seed", r.seed},
         {"notes", r.notes}};
  if (include_sections) j["sections"] = sections(r.sections);
  return j;
}

json to_json(const RepresentationReport& r) {
  return {{"candidate", r.measure ? "measure" : "function"},
          {"max_residual", number(r.max_residual)},
          {"residual_std_error", number(r.residual_error)},
          {"relative_residual", number(r.relative_residual)},
          {"verdict", verdict(r.verdict)},
          {"probes", r.probes},
          {"rotations_per_probe", r.rotations},
          {"min_phi", number(r.min_phi)},
          {"phi_negative_somewhere", r.phi_negative_somewhere}};
}

json to_json(const CounterexampleResult& r, bool include_sections) {
  json j{{"space", {{"n", r.n}, {"i", r.i}}},
         {"base_body", r.base_body},
         {"weights", r.weights},
         {"phi", r.phi_description},
         {"cap_center", vec(r.cap_center)},
         {"cap_radius", r.cap_radius},
         {"phi_min", r.phi_min},
         {"bump_power", r.bump_power},
         {"bump_floor", r.bump_floor},
         {"g_degree", r.g.max_degree},
         {"g_max_abs", r.g_max_abs},
         {"epsilon", r.epsilon},
         {"halvings", r.halvings},
         {"body_k", r.k ? json(r.k->description()) : json(nullptr)},
         {"neg_integral", to_json(r.neg_integral)},
         {"neg_integral_direct", to_json(r.neg_integral_direct)},
         {"max_section_difference", number(r.max_section_difference)},
         {"section_identity_residual", r.section_identity_residual},
         {"sampled_subspaces", r.sections.size()},
         {"sections_verdict", verdict(r.sections_verdict)},
         {"lemma_term", to_json(r.lemma_term)},
         {"lemma_min_pointwise", number(r.lemma_min_pointwise)},
         {"volume_difference_k_minus_l", to_json(r.volume_difference)},
         {"volume_difference_direct", to_json(r.volume_difference_direct)},
         {"volume_verdict", verdict(r.volume_verdict)},
         {"eeeq1_margin", to_json(r.eeeq1_margin)},
         {"convex", r.convex},
         {"convexity_failed", r.convexity_failed},
         {"convexity_excess", r.convexity_excess},
         {"base_convex", r.base_convex},
         {"b_identity_residual", r.b_identity_residual},
         {"representation_residual", r.representation_residual},
         {"seed", r.seed},
         {"notes", r.notes}};
  json g = json::array();
  for (std::size_t k = 0; k < r.g.coeffs.size(); ++k)
    if (r.g.coeffs[k] != 0.0) g.push_back({{"degree", k}, {"coefficient", r.g.coeffs[k]}});
  j["g_coefficients"] = g;
  if (include_sections) j["sections"] = sections(r.sections);
  return j;
}

json to_json(const ScenarioOutcome& s) {
  json verdicts = json::array();
  for (const auto& [name, v] : s.verdicts) verdicts.push_back({{"name", name}, {"verdict", verdict(v)}});
  json values = json::object();
  for (const auto& [name, e] : s.values) values[name] = to_json(e);
  json numbers = json::object();
  for (const auto& [name, x] : s.numbers) numbers[name] = number(x);
  json imps = json::array();
  for (const auto& r : s.implications) imps.push_back(to_json(r, false));
  json reps = json::array();
  for (const auto& r : s.representations) reps.push_back(to_json(r));
  return {{"name", s.name},          {"verdicts", verdicts},    {"values", values},
          {"numbers", numbers},      {"implications", imps},    {"representations", reps},
          {"overall", verdict(s.overall())}, {"notes", s.notes}};
}

json to_json(const DualityReport& d) {
  return {{"lhs", to_json(d.lhs)},
          {"rhs", to_json(d.rhs)},
          {"residual", d.residual},
          {"combined_std_error", d.combined_error},
          {"verdict", verdict(d.verdict)}};
}

json envelope(const std::string& scenario, const json& config, std::uint64_t seed) {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::ostringstream ts;
  ts << std::put_time(std::gmtime(&t), "%Y-%m-%dT%H:%M:%SZ");
  return {{"spec_version", kSchemaVersion},
          {"artifact", {{"name", "wbp"}, {"version", kArtifactVersion}}},
          {"scenario", scenario},
          {"config", config},
          {"seed", seed},
          {"timestamp", ts.str()}};
}

json without_timestamp(json report) {
  report.erase("timestamp");
  return report;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_sections_csv(std::ostream& out, const std::vector<SectionSample>& sections) {
  out << std::setprecision(17);
  out << "index,frame,section_k,std_error_k,section_l,std_error_l,verdict\r\n";
  for (std::size_t s = 0; s < sections.size(); ++s) {
    const auto& x = sections[s];
    std::ostringstream frame;
    frame << std::setprecision(17);
    for (Eigen::Index r = 0; r < x.frame.rows(); ++r)
      for (Eigen::Index c = 0; c < x.frame.cols(); ++c) frame << (r + c ? " " : "") << x.frame(r, c);
    out << s << "," << csv_field(frame.str()) << "," << x.k.value << "," << x.k.std_error << "," << x.l.value << ","
        << x.l.std_error << "," << to_string(x.verdict) << "\r\n";
  }
}

void write_great_circle_csv(std::ostream& out, const GrassmannFunction& phi, const Vec& a, const Vec& b, int points) {
  out << std::setprecision(17) << "angle,phi\r\n";
  for (int k = 0; k < points; ++k) {
    const double t = std::numbers::pi * k / std::max(1, points - 1);
    const Vec eta = std::cos(t) * a + std::sin(t) * b;
    out << t << "," << phi(SubspaceFrame::hyperplane(Direction::from_vector(eta))) << "\r\n";
  }
}

}  // namespace wbp::cli
