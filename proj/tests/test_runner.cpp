// End-to-end runs through the orchestration layer: artifact set, CSV shape,
// report contents, environment overrides, and bit-exact checkpoint resume.

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "nemflow/config.hpp"
#include "nemflow/diagnostics.hpp"
#include "nemflow/kernels.hpp"
#include "nemflow/runner.hpp"
#include "nemflow/scenario.hpp"
#include "nemflow/snapshot.hpp"

using namespace nemflow;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  REQUIRE(is.good());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) out.push_back(line);
  return out;
}

}  // namespace

TEST_SUITE("runner") {

TEST_CASE("an equilibrium run conserves invariants and writes every artifact") {
  const std::string dir = "/tmp/nemflow_run_eq";
  fs::remove_all(dir);
  const RunConfig cfg = parse_config(R"({
    "grid": {"extents": [64]},
    "initial": {"scenario": "equilibrium"},
    "t_end": 0.5,
    "output": {"dir": "/tmp/nemflow_run_eq", "stride": 10}
  })");

  const RunResult res = run(cfg);
  CHECK(res.status == "completed");
  CHECK(res.exit_code == 0);
  CHECK(res.steps > 50);
  CHECK(res.t_final == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(res.progress.max_mass_drift <= 1e-12);
  CHECK(res.progress.max_unit_drift <= 1e-12);
  CHECK(res.progress.max_energy_residual <= 1e-10);
  CHECK(energy(res.final_state) <= 1e-20);

  for (const char* name :
       {kCsvFile, kReportFile, kSnapshotFile, kCheckpointFile})
    CHECK(fs::exists(fs::path(dir) / name));

  // CSV: hash comment, pinned header, one row per stride plus the final row
  const auto csv = lines_of(slurp(dir + "/" + kCsvFile));
  REQUIRE(csv.size() >= 3);
  CHECK(csv[0].rfind("# config_hash=" + hash_hex(cfg.hash), 0) == 0);
  CHECK(csv[0].find(" version=") != std::string::npos);
  CHECK(csv[1] == kCsvHeader);
  const long expect_rows = res.steps / 10 + 1 + (res.steps % 10 ? 1 : 0);
  CHECK(static_cast<long>(csv.size()) == expect_rows + 2);
  CHECK(res.progress.rows_written == expect_rows);

  // report: identity, determinism block, diagnostics summary
  const nlohmann::json rep = nlohmann::json::parse(slurp(dir + "/" + kReportFile));
  CHECK(rep.at("status") == "completed");
  CHECK(rep.at("config_hash") == hash_hex(cfg.hash));
  CHECK(rep.at("scenario") == "equilibrium");
  CHECK(rep.at("steps").get<long>() == res.steps);
  CHECK(rep.at("determinism").at("isa") == kernels::active().name);
  CHECK(rep.at("initial").at("mass").get<double>() ==
        doctest::Approx(6.283185307179586).epsilon(1e-13));
  CHECK(rep.at("metadata").at("blowup_margin_ok").get<bool>());
  CHECK_FALSE(rep.at("floor_check").at("checked").get<bool>());
  CHECK(rep.contains("pressure_decomposition"));
  CHECK(rep.at("phi_sup").get<double>() > 1.0);

  // artifacts carry the config hash
  CHECK(inspect_file(dir + "/" + kSnapshotFile).config_hash == cfg.hash);
  CHECK(inspect_file(dir + "/" + kCheckpointFile).config_hash == cfg.hash);
  fs::remove_all(dir);
}

TEST_CASE("max_steps caps a run before t_end") {
  const std::string dir = "/tmp/nemflow_run_cap";
  fs::remove_all(dir);
  const RunConfig cfg = parse_config(R"({
    "grid": {"extents": [32]},
    "initial": {"scenario": "equilibrium"},
    "t_end": 10.0,
    "max_steps": 3,
    "output": {"dir": "/tmp/nemflow_run_cap"}
  })");
  const RunResult res = run(cfg);
  CHECK(res.status == "completed");
  CHECK(res.steps == 3);
  CHECK(res.t_final < 10.0);
  fs::remove_all(dir);
}

TEST_CASE("the output directory environment override wins") {
  const std::string ovr = "/tmp/nemflow_run_ovr";
  const std::string configured = "/tmp/nemflow_run_should_not_appear";
  fs::remove_all(ovr);
  fs::remove_all(configured);

  RunConfig cfg = parse_config(R"({
    "grid": {"extents": [32]},
    "initial": {"scenario": "equilibrium"},
    "max_steps": 2,
    "output": {"dir": "/tmp/nemflow_run_should_not_appear"}
  })");
  setenv("NEMFLOW_OUTPUT_DIR", ovr.c_str(), 1);
  CHECK(resolve_output_dir(cfg) == ovr);
  const RunResult res = run(cfg);
  unsetenv("NEMFLOW_OUTPUT_DIR");

  CHECK(res.status == "completed");
  CHECK(res.output_dir == ovr);
  CHECK(fs::exists(fs::path(ovr) / kReportFile));
  CHECK_FALSE(fs::exists(configured));
  fs::remove_all(ovr);
}

TEST_CASE("resume from a stride checkpoint reproduces the run bit-exactly") {
  const std::string dir_a = "/tmp/nemflow_run_full";
  const std::string dir_b = "/tmp/nemflow_run_resumed";
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);

  const RunConfig cfg = parse_config(R"({
    "grid": {"extents": [64]},
    "initial": {"scenario": "acoustic-1d",
                "params": {"amplitude": 0.2, "wavenumber": 2}},
    "t_end": 0.1,
    "output": {"dir": "/tmp/nemflow_run_full", "checkpoint_stride": 5}
  })");
  const RunResult full = run(cfg);
  REQUIRE(full.status == "completed");
  REQUIRE(full.steps > 12);  // the stride checkpoint below must be mid-run
  const std::string mid = dir_a + "/checkpoint_00000010.nfc";
  REQUIRE(fs::exists(mid));

  setenv("NEMFLOW_OUTPUT_DIR", dir_b.c_str(), 1);
  const RunResult cont = resume(mid);
  unsetenv("NEMFLOW_OUTPUT_DIR");

  CHECK(cont.status == "completed");
  CHECK(cont.steps == full.steps);
  CHECK(cont.t_final == full.t_final);
  CHECK(slurp(dir_b + "/" + kSnapshotFile) == slurp(dir_a + "/" + kSnapshotFile));
  CHECK(slurp(dir_b + "/" + kCheckpointFile) ==
        slurp(dir_a + "/" + kCheckpointFile));
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}

TEST_CASE("resume refuses a checkpoint whose config hash disagrees") {
  const RunConfig cfg = parse_config(R"({
    "grid": {"extents": [32]},
    "initial": {"scenario": "equilibrium"}
  })");
  Checkpoint c;
  c.state = make_scenario("equilibrium", cfg.grid, {}, 0);
  c.canonical_config = canonical_config(cfg);
  c.config_hash = cfg.hash ^ 0x1;  // tampered

  const std::string path = "/tmp/nemflow_tampered.nfc";
  write_checkpoint(path, c);
  const RunResult res = resume(path);
  CHECK(res.status == "error");
  CHECK(res.exit_code == 1);
  CHECK(res.error.find("checkpoint config hash mismatch") != std::string::npos);
  fs::remove(path);
}

}  // TEST_SUITE
