#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "gbdt/dressing.hpp"
#include "gbdt/seed.hpp"
#include "gbdt/trajectory.hpp"
#include "gbdt/triple.hpp"
#include "gbdt/verify.hpp"

namespace gbdt::cli {

/// Everything a run needs, merged from a config file and command-line flags
/// (flags win).
struct RunConfig {
  // triple source: an inline document wins over an example selector
  nlohmann::json inline_triple;  // null when unset
  std::optional<int> example;    // 1..4

  // example parameters
  double calA = 1.0;
  double m1 = 1.0;
  double m2 = 1.0;
  int sign1 = +1;
  int sign2 = +1;
  int n = 2;
  std::optional<std::uint64_t> rng_seed;  // required for examples 3 and 4

  SeedPotential seed = SeedPotential::zero();

  std::optional<GridSpec> x_grid;
  std::optional<GridSpec> y_grid;
  std::string h_spec = "e1";

  EvalMethod method = EvalMethod::Auto;
  IntegrateOptions ode;
  VerificationThresholds thresholds;

  // physical constants: both or neither
  std::optional<double> hbar_vf;
  std::optional<double> energy;

  bool inject_error = false;
  std::string out_path;  // empty -> stdout
};

/// "min:max:step", endpoints inclusive within half a step.
GridSpec parse_grid(const std::string& spec);

/// "e<k>" (standard basis), "0", or a comma list of entries "re" / "re:im".
ComplexVector parse_h(const std::string& spec, int n);

/// "zero" | "constant:<c>" | "gaussian:<amp>,<center>,<width>" |
/// "tabulated:<path.json>".
SeedPotential parse_seed(const std::string& spec);

EvalMethod parse_method(const std::string& name);

/// Merge a config-file document into `cfg` (sections: triple, seed, grids,
/// h, method, tolerances, physical).
void apply_config_json(const nlohmann::json& j, RunConfig& cfg);

/// Build the parameter triple the config points at.
ParameterTriple resolve_triple(const RunConfig& cfg);

}  // namespace gbdt::cli
