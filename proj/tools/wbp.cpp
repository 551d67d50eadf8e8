// wbp: weighted Busemann-Petty computations from the command line.
//
//   wbp <subcommand> [--config FILE] [--seed N] [--samples N] [--out DIR] [--format json,csv]
//
// Exit status: 0 when every verdict is definite, 2 when some verdict is indeterminate, 1 on error.

#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "wbp/cli/run.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::string out;
  std::string format;
  std::string name;
};

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

wbp::cli::ScenarioConfig assemble(const std::string& command, const Flags& f) {
  using wbp::ConfigError;
  wbp::cli::ScenarioConfig c;
  if (!f.config.empty()) c = wbp::cli::load_config(f.config);
  std::string wanted = command;
  if (command == "scenario") {
    wanted = f.name.empty() ? c.scenario : f.name;
    if (wanted != "equal-weights" && wanted != "power-weights" && wanted != "homogeneous" && wanted != "wgamma-example")
      throw ConfigError("scenario: name must be one of equal-weights, power-weights, homogeneous, wgamma-example");
  } else if (command == "run") {
    wanted = c.scenario;
  }
  if (!c.scenario.empty() && c.scenario != wanted)
    throw ConfigError("scenario.name: config names '" + c.scenario + "' but the command asks for '" + wanted + "'");
  c.scenario = wanted;
  if (f.seed) c.seed = *f.seed;
  if (f.samples) {
    c.params.samples = *f.samples;
    c.params.counterexample.samples = *f.samples;
    c.params.rotations = *f.samples;
    c.quadrature.samples = *f.samples;
  }
  if (!f.out.empty()) c.output_path = f.out;
  if (!f.format.empty()) c.formats = split(f.format);
  wbp::cli::validate(c);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted Busemann-Petty toolkit: sections, volumes, Radon transforms and counterexamples"};
  app.require_subcommand(1);
  Flags flags;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"run", "run the scenario named in the config"},
      {"verify-duality", "check the Radon duality relation on random functions"},
      {"section-volume", "weighted section volumes of a body"},
      {"implication", "test sections => volumes for a pair of bodies"},
      {"representation", "verify a_K = R^* phi for a candidate"},
      {"counterexample", "construct and certify a volume reversal"},
      {"funk-invert", "invert the Funk transform of a comparison function"},
      {"scenario", "run one of the worked scenarios"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    CLI::Option* config = sub->add_option("--config", flags.config, "YAML configuration file")->check(CLI::ExistingFile);
    if (name == "run") config->required();
    sub->add_option("--seed", flags.seed, "RNG seed (overrides the config)");
    sub->add_option("--samples", flags.samples, "Monte Carlo budget (overrides the config)");
    sub->add_option("--out", flags.out, "output directory (default: $WBP_OUT_DIR or ./wbp_out)");
    sub->add_option("--format", flags.format, "comma-separated output formats: json,csv");
    if (name == "scenario")
      sub->add_option("--name", flags.name, "equal-weights | power-weights | homogeneous | wgamma-example");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return wbp::cli::run(assemble(command, flags), std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
