#pragma once
// Binary field files.  Shared 64-byte header (magic, format version, config
// hash, code version), then a grid block, then raw little-endian float64
// arrays in row-major cell order, component-major.  Checkpoints append the
// running accumulators, report peaks, history needed by the floor check,
// the spectral coefficients, and the canonical config so a resumed run can
// rebuild everything bit-exactly.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nemflow/diagnostics.hpp"
#include "nemflow/lame.hpp"
#include "nemflow/state.hpp"

namespace nemflow {

struct SnapshotInfo {
  bool is_checkpoint = false;
  std::uint32_t version = 0;
  std::uint64_t config_hash = 0;
  std::string code_version;
  Grid grid;
  double t = 0.0;
  long step_index = 0;
};

void write_snapshot(const std::string& path, const State& s,
                    std::uint64_t config_hash);
// director_defect, when given, receives max | |d|-1 | of the stored field
State read_snapshot(const std::string& path, SnapshotInfo* info = nullptr,
                    double* director_defect = nullptr);

// everything a resumed run needs besides the state itself
struct RunProgress {
  BlowupAccumulator acc;
  double phi_sup = 0.0;
  double peak_rho = 0.0;
  double peak_grad_d = 0.0;
  double peak_def = 0.0;
  double peak_grad_u = 0.0;
  double max_energy_residual = 0.0;
  double max_unit_drift = 0.0;
  double max_vacuum_residual = 0.0;
  double max_mass_drift = 0.0;
  double mass0 = 0.0;
  double energy0 = 0.0;
  double initial_director_defect = 0.0;
  long rows_written = 0;
  std::vector<double> hist_t, hist_min_rho, hist_grad_u;
  std::vector<double> galerkin_coeffs;  // empty in grid mode
};

struct Checkpoint {
  State state;
  RunProgress progress;
  std::uint64_t config_hash = 0;
  std::string canonical_config;
};

void write_checkpoint(const std::string& path, const Checkpoint& c);
Checkpoint read_checkpoint(const std::string& path);

// header-only peek (works for snapshots and checkpoints)
SnapshotInfo inspect_file(const std::string& path);

// eigenbasis disk cache; the key pins grid, viscosity, family and mode count
std::uint64_t basis_cache_key(const LameParams& p, const Grid& g, VelocityBc bc,
                              int m);
void write_basis(const std::string& path, const EigenBasis& basis,
                 std::uint64_t key);
// empty when the file is missing or keyed differently
std::optional<EigenBasis> read_basis(const std::string& path,
                                     std::uint64_t expect_key);

}  // namespace nemflow
