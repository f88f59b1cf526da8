#pragma once
// Built-in initial-condition generators.  A scenario produces the t = 0
// fields for a given grid; static traits describe what it needs from the
// run configuration (dimension, boundary family, which stages make sense).

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nemflow/ops.hpp"
#include "nemflow/state.hpp"

namespace nemflow {

using ScenarioParams = std::map<std::string, double>;

struct ScenarioTraits {
  bool known = false;
  int required_dim = 0;  // 0 = any
  std::optional<VelocityBc> required_bc;
  // stage recommendations; explicit config keys win over these
  std::optional<bool> transport;
  std::optional<bool> momentum;
  std::optional<bool> director;
  const char* note = "";
};

ScenarioTraits scenario_traits(const std::string& name);
std::vector<std::string> scenario_names();

// Fields at t = 0.  Unknown names and parameter/grid mismatches throw.
// seed feeds the optional "noise" perturbation where a scenario supports it.
State make_scenario(const std::string& name, const Grid& g,
                    const ScenarioParams& params, std::uint64_t seed);

}  // namespace nemflow
