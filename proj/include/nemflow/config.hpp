#pragma once
// Run configuration: JSON in, validated RunConfig out.  Schema errors carry
// the offending field path; physics errors name the violated condition.
// Every artifact a run writes embeds hash(config), so equal hashes mean
// identical configurations.

#include <cstdint>
#include <string>

#include "nemflow/scenario.hpp"
#include "nemflow/state.hpp"

namespace nemflow {

struct RunConfig {
  Grid grid;
  ProblemSetup prob;     // bc, viscosity, pressure law, delta
  StepConfig step;       // post-merge of defaults, scenario traits, config
  std::string scenario = "equilibrium";
  ScenarioParams scenario_params;
  std::string snapshot_path;  // initial fields from file instead of scenario
  double t_end = 1.0;
  long max_steps = -1;        // -1 = until t_end
  long output_stride = 1;
  long checkpoint_stride = 0;  // 0 = final checkpoint only
  std::string output_dir = "out";
  std::uint64_t seed = 0;

  // metadata carried into the report
  bool blowup_margin_ok = true;
  std::string notes;
  std::uint64_t hash = 0;

  bool from_snapshot() const { return !snapshot_path.empty(); }
};

RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// canonical serialization (sorted keys, defaults filled); hash input
std::string canonical_config(const RunConfig& cfg);
std::uint64_t fnv1a(const std::string& text);

std::string hash_hex(std::uint64_t h);

}  // namespace nemflow
