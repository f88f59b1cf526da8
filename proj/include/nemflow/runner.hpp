#pragma once
// Run orchestration: initial-data construction, the time loop, and the run
// artifacts (time-series CSV, snapshot, checkpoint, report JSON).  A run is
// deterministic given config, seed and instruction-set selection; resuming
// from a checkpoint continues the trajectory bit-exactly.

#include <string>

#include "nemflow/config.hpp"
#include "nemflow/snapshot.hpp"

namespace nemflow {

extern const char* const kCsvHeader;
extern const char* const kCsvFile;
extern const char* const kReportFile;
extern const char* const kSnapshotFile;
extern const char* const kCheckpointFile;

struct RunResult {
  std::string status;  // "completed" | "breakdown-detected" | "error"
  std::string breakdown_quantity;
  std::string error;
  int exit_code = 0;  // 0 completed, 2 breakdown, 1 hard error
  long steps = 0;
  double t_final = 0.0;
  std::string output_dir;  // resolved, after environment override
  State final_state;
  RunProgress progress;
  bool floor_checked = false;
  bool floor_pass = true;
};

RunResult run(const RunConfig& cfg);
RunResult resume(const std::string& checkpoint_path);

// output directory after the NEMFLOW_OUTPUT_DIR override
std::string resolve_output_dir(const RunConfig& cfg);

}  // namespace nemflow
