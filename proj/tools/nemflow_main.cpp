// Command-line front end.  Verbs:
//   run <config>         execute a run, write artifacts to the output dir
//   resume <checkpoint>  continue a checkpointed run bit-exactly
//   inspect <file>       print the header of a snapshot or checkpoint
//   validate <config>    parse and cross-check a config, print a summary
//   basis-cache <config> precompute the spectral basis into the output dir
// Exit codes: 0 ok, 1 hard error, 2 breakdown detected.

#include <cinttypes>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>

#include "CLI11.hpp"
#include "nemflow/config.hpp"
#include "nemflow/initial_data.hpp"
#include "nemflow/kernels.hpp"
#include "nemflow/lame.hpp"
#include "nemflow/runner.hpp"
#include "nemflow/snapshot.hpp"
#include "nemflow/version.hpp"

namespace {

using namespace nemflow;

const char* family_label(VelocityBc bc) {
  switch (bc) {
    case VelocityBc::PeriodicProxy: return "CauchyPeriodicProxy";
    case VelocityBc::Dirichlet: return "DirichletNeumann";
    default: return "NavierSlipNeumann";
  }
}

void print_grid(const Grid& g) {
  std::printf("  grid: %dd,", g.dim);
  for (int a = 0; a < g.dim; ++a)
    std::printf(" %d x [%g, %g]%s%s", g.extents[a], g.origin[a],
                g.origin[a] + g.length(a),
                g.periodic(a) ? " periodic" : " wall", a + 1 < g.dim ? "," : "");
  std::printf("\n");
}

int report_outcome(const RunResult& r) {
  if (r.status == "completed") {
    std::printf("completed: %ld steps, t = %.6g\n", r.steps, r.t_final);
    std::printf("  output: %s\n", r.output_dir.c_str());
    return r.exit_code;
  }
  if (r.status == "breakdown-detected") {
    std::printf("breakdown-detected: first non-finite quantity is %s "
                "(after %ld steps, t = %.6g)\n",
                r.breakdown_quantity.c_str(), r.steps, r.t_final);
    std::printf("  output: %s\n", r.output_dir.c_str());
    return r.exit_code;
  }
  std::fprintf(stderr, "error: %s\n", r.error.c_str());
  if (!r.output_dir.empty())
    std::fprintf(stderr, "  partial output: %s\n", r.output_dir.c_str());
  return r.exit_code;
}

int cmd_run(const std::string& path) {
  RunConfig cfg = parse_config_file(path);
  std::printf("nemflow %s, %s kernels, config %s\n", kVersion,
              kernels::active().name, hash_hex(cfg.hash).c_str());
  if (!cfg.blowup_margin_ok)
    std::printf("  note: 7*mu > 9*lambda fails; continuation margin "
                "estimates do not apply\n");
  return report_outcome(run(cfg));
}

int cmd_resume(const std::string& path) {
  std::printf("nemflow %s, %s kernels\n", kVersion, kernels::active().name);
  return report_outcome(resume(path));
}

int cmd_inspect(const std::string& path) {
  SnapshotInfo info = inspect_file(path);
  std::printf("%s (format v%u, written by %s)\n",
              info.is_checkpoint ? "checkpoint" : "snapshot", info.version,
              info.code_version.c_str());
  std::printf("  config hash: %s\n", hash_hex(info.config_hash).c_str());
  print_grid(info.grid);
  std::printf("  t = %.17g, step %ld\n", info.t, info.step_index);
  // unit-length audit of the stored director
  double defect = 0.0;
  if (info.is_checkpoint) {
    Checkpoint c = read_checkpoint(path);
    normalize_director(c.state.d, &defect);
  } else {
    read_snapshot(path, nullptr, &defect);
  }
  std::printf("  director unit defect: %.3e%s\n", defect,
              defect <= 1e-12 ? "" : "  (exceeds 1e-12)");
  return 0;
}

int cmd_validate(const std::string& path) {
  RunConfig cfg = parse_config_file(path);
  std::printf("valid: config %s\n", hash_hex(cfg.hash).c_str());
  print_grid(cfg.grid);
  std::printf("  family: %s\n", family_label(cfg.prob.bc));
  std::printf("  viscosity: mu = %g, lambda = %g\n", cfg.prob.lame.mu,
              cfg.prob.lame.lambda);
  if (cfg.blowup_margin_ok)
    std::printf("  continuation margin: c0 = %g\n",
                cfg.prob.lame.c0().value_or(0.0));
  else
    std::printf("  warning: 7*mu > 9*lambda fails; continuation margin "
                "estimates do not apply\n");
  if (cfg.prob.law.kind() == PressureLaw::Kind::Isentropic)
    std::printf("  pressure: a = %g, gamma = %g\n", cfg.prob.law.coeff_a(),
                cfg.prob.law.gamma());
  else
    std::printf("  pressure: tabulated, %zu nodes\n",
                cfg.prob.law.rho_nodes().size());
  std::printf("  scheme: %s%s, delta = %g\n",
              cfg.step.mode == SchemeMode::Galerkin ? "galerkin" : "grid",
              cfg.step.mode == SchemeMode::Galerkin
                  ? (", m = " + std::to_string(cfg.step.m)).c_str()
                  : "",
              cfg.prob.delta);
  std::printf("  stages:%s%s%s\n",
              cfg.step.evolve_transport ? " transport" : "",
              cfg.step.evolve_momentum ? " momentum" : "",
              cfg.step.evolve_director ? " director" : "");
  if (cfg.from_snapshot())
    std::printf("  initial: snapshot %s\n", cfg.snapshot_path.c_str());
  else
    std::printf("  initial: scenario %s\n", cfg.scenario.c_str());
  std::printf("  t_end = %g, output: %s\n", cfg.t_end,
              resolve_output_dir(cfg).c_str());
  if (!cfg.notes.empty()) std::printf("  note: %s\n", cfg.notes.c_str());
  return 0;
}

int cmd_basis_cache(const std::string& path) {
  RunConfig cfg = parse_config_file(path);
  const std::uint64_t key =
      basis_cache_key(cfg.prob.lame, cfg.grid, cfg.prob.bc, cfg.step.m);
  const std::string dir = resolve_output_dir(cfg);
  std::filesystem::create_directories(dir);
  const std::string file = dir + "/basis-" + hash_hex(key) + ".nfb";
  if (read_basis(file, key)) {
    std::printf("basis cache up to date: %s\n", file.c_str());
    return 0;
  }
  EigenBasis basis = eigenbasis(cfg.prob.lame, cfg.grid, cfg.prob.bc, cfg.step.m);
  write_basis(file, basis, key);
  std::printf("wrote %d %s modes: %s\n", basis.count(),
              basis.analytic ? "analytic" : "discrete", file.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"compressible nematic liquid-crystal flow simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", nemflow::kVersion);

  std::string run_cfg, resume_path, inspect_path, validate_cfg, basis_cfg;
  app.add_subcommand("run", "execute a run from a config file")
      ->add_option("config", run_cfg, "JSON config path")->required();
  app.add_subcommand("resume", "continue from a checkpoint")
      ->add_option("checkpoint", resume_path, "checkpoint path")->required();
  app.add_subcommand("inspect", "describe a snapshot or checkpoint")
      ->add_option("file", inspect_path, "snapshot or checkpoint path")->required();
  app.add_subcommand("validate", "check a config and print the resolved setup")
      ->add_option("config", validate_cfg, "JSON config path")->required();
  app.add_subcommand("basis-cache", "precompute the spectral velocity basis")
      ->add_option("config", basis_cfg, "JSON config path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("run")) return cmd_run(run_cfg);
    if (app.got_subcommand("resume")) return cmd_resume(resume_path);
    if (app.got_subcommand("inspect")) return cmd_inspect(inspect_path);
    if (app.got_subcommand("validate")) return cmd_validate(validate_cfg);
    if (app.got_subcommand("basis-cache")) return cmd_basis_cache(basis_cfg);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
