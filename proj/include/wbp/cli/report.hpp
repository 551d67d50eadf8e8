#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wbp/bp_engine.hpp"

namespace wbp::cli {

inline constexpr int kSchemaVersion = 1;
extern const char* const kArtifactVersion;

nlohmann::json to_json(const Estimate& e);
nlohmann::json to_json(const Admissibility& a);
nlohmann::json to_json(const ImplicationReport& r, bool include_sections);
nlohmann::json to_json(const RepresentationReport& r);
nlohmann::json to_json(const CounterexampleResult& r, bool include_sections);
nlohmann::json to_json(const ScenarioOutcome& s);
nlohmann::json to_json(const DualityReport& d);

/// Report envelope: schema version, artifact version, config echo, seed and a UTC timestamp.
nlohmann::json envelope(const std::string& scenario, const nlohmann::json& config, std::uint64_t seed);

/// Copy without the timestamp field, for comparisons between runs.
nlohmann::json without_timestamp(nlohmann::json report);

/// RFC 4180 field quoting.
std::string csv_field(const std::string& s);

/// Per-subspace sections: index, frame columns (row major), V(K), err, V(L), err, verdict.
void write_sections_csv(std::ostream& out, const std::vector<SectionSample>& sections);

/// phi along the great circle cos(t) a + sin(t) b of hyperplane normals.
void write_great_circle_csv(std::ostream& out, const GrassmannFunction& phi, const Vec& a, const Vec& b, int points);

}  // namespace wbp::cli
