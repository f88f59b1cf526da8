#include "nemflow/runner.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "json.hpp"
#include "nemflow/evolution.hpp"
#include "nemflow/initial_data.hpp"
#include "nemflow/kernels.hpp"
#include "nemflow/ops.hpp"
#include "nemflow/scenario.hpp"
#include "nemflow/version.hpp"

namespace nemflow {

const char* const kCsvHeader =
    "t,mass,energy,viscous_dissipation,director_dissipation,min_rho,max_rho,"
    "sup_grad_d,sup_def_tensor,int_grad_d_cubed,int_def_tensor,"
    "int_grad_d_squared,phi_proxy,energy_residual,unit_drift";
const char* const kCsvFile = "timeseries.csv";
const char* const kReportFile = "report.json";
const char* const kSnapshotFile = "snapshot_final.nfs";
const char* const kCheckpointFile = "checkpoint.nfc";

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

long env_threads() {
  const char* t = std::getenv("NEMFLOW_THREADS");
  if (!t) return 1;
  const long v = std::strtol(t, nullptr, 10);
  return v >= 1 ? v : 1;
}

std::string csv_row(const DiagnosticsRecord& r, const BlowupAccumulator& acc,
                    double phi_sup) {
  char buf[640];
  std::snprintf(buf, sizeof buf,
                "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                "%.17g,%.17g,%.17g,%.17g,%.17g",
                r.t, r.mass, r.energy, r.viscous_dissipation,
                r.director_dissipation, r.min_rho, r.max_rho, r.sup_grad_d,
                r.sup_def_tensor, acc.int_grad_d_cubed, acc.int_def_tensor,
                acc.int_grad_d_squared, phi_sup, r.energy_residual,
                r.unit_drift);
  return buf;
}

// the weighted-acceleration seed for the t = 0 record: with the
// compatibility balance, sqrt(rho) g equals L u - grad P - director stress
double initial_weighted_acceleration(const State& s, const ProblemSetup& prob) {
  VectorField numer = apply_lame(prob.lame, s.u, prob.bc);
  const VectorField gp = grad(prob.law.eval_p(s.rho));
  const VectorField stress = director_stress_direct(s.d);
  const std::size_t n = s.rho.size();
  const auto& k = kernels::active();
  for (int c = 0; c < s.rho.grid.dim; ++c) {
    k.add_scaled(n, -1.0, gp.comp[c].data(), numer.comp[c].data());
    k.add_scaled(n, -1.0, stress.comp[c].data(), numer.comp[c].data());
  }
  return lp_norm(numer, 2.0);
}

DiagnosticsRecord initial_record(const State& s, const ProblemSetup& prob,
                                 double director_defect) {
  const auto& k = kernels::active();
  DiagnosticsRecord rec;
  rec.t = s.t;
  rec.dt = 0.0;
  rec.step_index = s.step_index;
  rec.mass = integrate(s.rho);
  rec.energy = energy(s);
  rec.viscous_dissipation = viscous_dissipation(prob.lame, s.u);
  rec.director_dissipation = director_dissipation(s.d);
  rec.min_rho = k.min_val(s.rho.size(), s.rho.data());
  const BlowupMonitors mon = blowup_monitors(s);
  rec.max_rho = mon.sup_rho;
  rec.sup_grad_d = mon.sup_grad_d;
  rec.sup_def_tensor = mon.sup_def_tensor;
  rec.sup_grad_u = mon.sup_grad_u;
  rec.unit_drift = director_defect;
  rec.phi_proxy = phi_proxy(s, initial_weighted_acceleration(s, prob), 6.0);
  ensure_finite(rec);
  return rec;
}

struct LoopContext {
  RunConfig cfg;
  std::string out_dir;
  State state;
  RunProgress progress;
  GalerkinWorkspace ws;
  bool has_ws = false;
  bool fresh = true;  // false when resuming: append to CSV, skip t = 0 row
};

void note_record(RunProgress& p, const DiagnosticsRecord& r) {
  p.acc.accumulate(r.t, r.sup_grad_d, r.sup_def_tensor, r.sup_grad_u);
  p.phi_sup = std::fmax(p.phi_sup, r.phi_proxy);
  p.peak_rho = std::fmax(p.peak_rho, r.max_rho);
  p.peak_grad_d = std::fmax(p.peak_grad_d, r.sup_grad_d);
  p.peak_def = std::fmax(p.peak_def, r.sup_def_tensor);
  p.peak_grad_u = std::fmax(p.peak_grad_u, r.sup_grad_u);
  p.max_energy_residual = std::fmax(p.max_energy_residual, r.energy_residual);
  p.max_unit_drift = std::fmax(p.max_unit_drift, r.unit_drift);
  p.max_vacuum_residual =
      std::fmax(p.max_vacuum_residual, r.vacuum_static_residual);
  if (p.mass0 > 0.0)
    p.max_mass_drift =
        std::fmax(p.max_mass_drift, std::fabs(r.mass - p.mass0) / p.mass0);
  p.hist_t.push_back(r.t);
  p.hist_min_rho.push_back(r.min_rho);
  p.hist_grad_u.push_back(r.sup_grad_u);
}

EigenBasis obtain_basis(const RunConfig& cfg, const std::string& out_dir) {
  const std::uint64_t key =
      basis_cache_key(cfg.prob.lame, cfg.grid, cfg.prob.bc, cfg.step.m);
  const std::string cache =
      (fs::path(out_dir) / ("basis-" + hash_hex(key) + ".nfb")).string();
  if (auto cached = read_basis(cache, key)) return std::move(*cached);
  EigenBasis basis = eigenbasis(cfg.prob.lame, cfg.grid, cfg.prob.bc, cfg.step.m);
  write_basis(cache, basis, key);
  return basis;
}

json report_json(const LoopContext& ctx, const RunResult& res) {
  const RunConfig& cfg = ctx.cfg;
  const RunProgress& p = ctx.progress;
  json j;
  j["status"] = res.status;
  if (!res.breakdown_quantity.empty())
    j["breakdown_quantity"] = res.breakdown_quantity;
  if (!res.error.empty()) j["error"] = res.error;
  j["config_hash"] = hash_hex(cfg.hash);
  j["code_version"] = kVersion;
  j["scenario"] = cfg.from_snapshot() ? "(snapshot)" : cfg.scenario;
  j["steps"] = res.steps;
  j["t_final"] = res.t_final;
  j["determinism"] = {{"isa", kernels::active().name},
                      {"threads", env_threads()}};
  json meta = {{"blowup_margin_ok", cfg.blowup_margin_ok}};
  if (auto c0 = cfg.prob.lame.c0()) meta["c0"] = *c0;
  if (!cfg.notes.empty()) meta["notes"] = cfg.notes;
  j["metadata"] = meta;
  j["initial"] = {{"mass", p.mass0},
                  {"energy", p.energy0},
                  {"director_defect", p.initial_director_defect},
                  {"delta", cfg.prob.delta}};
  j["peaks"] = {{"rho", p.peak_rho},
                {"grad_d", p.peak_grad_d},
                {"def_tensor", p.peak_def},
                {"grad_u", p.peak_grad_u}};
  j["accumulators"] = {{"int_grad_d_cubed", p.acc.int_grad_d_cubed},
                       {"int_grad_d_squared", p.acc.int_grad_d_squared},
                       {"int_def_tensor", p.acc.int_def_tensor},
                       {"int_grad_u", p.acc.int_grad_u}};
  j["residuals"] = {{"max_energy_residual", p.max_energy_residual},
                    {"max_unit_drift", p.max_unit_drift},
                    {"max_mass_drift", p.max_mass_drift},
                    {"max_vacuum_static_residual", p.max_vacuum_residual}};
  j["phi_sup"] = p.phi_sup;

  if (res.floor_checked) {
    long violations = 0;
    FloorCheckReport fr = density_floor_check(p.hist_t, p.hist_min_rho,
                                              p.hist_grad_u, cfg.prob.delta);
    for (const auto& row : fr.rows) violations += row.ok ? 0 : 1;
    j["floor_check"] = {{"checked", true},
                        {"pass", fr.pass},
                        {"delta", cfg.prob.delta},
                        {"violations", violations}};
  } else {
    j["floor_check"] = {{"checked", false}};
  }

  if (res.status != "error") {
    try {
      const PressureDecomposition pd = pressure_decompose(
          ctx.cfg.prob.lame, ctx.cfg.prob.law, res.final_state.rho, cfg.prob.bc);
      j["pressure_decomposition"] = {{"grad_v_l2", pd.grad_v_l2},
                                     {"grad_v_l6", pd.grad_v_l6},
                                     {"p_l2", pd.p_l2},
                                     {"p_l6", pd.p_l6}};
    } catch (const std::exception&) {
      // decomposition is informational; leave it out when the solve fails
    }
  }
  return j;
}

RunResult run_loop(LoopContext& ctx) {
  const RunConfig& cfg = ctx.cfg;
  RunResult res;
  res.output_dir = ctx.out_dir;

  fs::create_directories(ctx.out_dir);
  const std::string csv_path = (fs::path(ctx.out_dir) / kCsvFile).string();
  std::ofstream csv(csv_path, ctx.fresh ? std::ios::trunc : std::ios::app);
  if (!csv) throw std::runtime_error("cannot write " + csv_path);
  csv.precision(17);

  GalerkinWorkspace* ws = ctx.has_ws ? &ctx.ws : nullptr;
  State& s = ctx.state;
  RunProgress& p = ctx.progress;
  long last_written_step = -1;

  auto write_row = [&](const DiagnosticsRecord& rec) {
    csv << csv_row(rec, p.acc, p.phi_sup) << "\n";
    p.rows_written += 1;
    last_written_step = rec.step_index;
  };
  auto save_checkpoint = [&](const std::string& file) {
    Checkpoint c;
    c.state = s;
    c.progress = p;
    if (ws) c.progress.galerkin_coeffs = ws->coeffs;
    c.config_hash = cfg.hash;
    c.canonical_config = canonical_config(cfg);
    write_checkpoint((fs::path(ctx.out_dir) / file).string(), c);
  };

  try {
    if (ctx.fresh) {
      csv << "# config_hash=" << hash_hex(cfg.hash) << " version=" << kVersion
          << "\n";
      csv << kCsvHeader << "\n";
      const DiagnosticsRecord rec0 =
          initial_record(s, cfg.prob, p.initial_director_defect);
      p.mass0 = rec0.mass;
      p.energy0 = rec0.energy;
      note_record(p, rec0);
      write_row(rec0);
    }

    const double t_end = cfg.t_end;
    while ((cfg.max_steps < 0 || s.step_index < cfg.max_steps) &&
           s.t < t_end * (1.0 - 1e-14)) {
      StepConfig sc = cfg.step;
      sc.dt_max = std::fmin(sc.dt_max, t_end - s.t);
      StepResult r = advance(s, sc, cfg.prob, ws);
      s = std::move(r.state);
      note_record(p, r.record);
      if (s.step_index % cfg.output_stride == 0) write_row(r.record);
      if (cfg.checkpoint_stride > 0 &&
          s.step_index % cfg.checkpoint_stride == 0) {
        // stride checkpoints are kept individually so any of them can seed
        // a restart after the run has moved on
        char name[32];
        std::snprintf(name, sizeof name, "checkpoint_%08ld.nfc", s.step_index);
        save_checkpoint(name);
      }
      // keep the final row even when it falls off the stride
      if (!((cfg.max_steps < 0 || s.step_index < cfg.max_steps) &&
            s.t < t_end * (1.0 - 1e-14)) &&
          last_written_step != s.step_index)
        write_row(r.record);
    }
    res.status = "completed";
    res.exit_code = 0;
  } catch (const BreakdownError& e) {
    res.status = "breakdown-detected";
    res.breakdown_quantity = e.quantity();
    res.exit_code = 2;
  } catch (const std::exception& e) {
    res.status = "error";
    res.error = e.what();
    res.exit_code = 1;
  }

  csv.flush();
  res.steps = s.step_index;
  res.t_final = s.t;
  res.final_state = s;
  if (ws) p.galerkin_coeffs = ws->coeffs;
  res.progress = p;
  res.floor_checked =
      cfg.step.mode == SchemeMode::Galerkin && cfg.prob.delta > 0.0;
  if (res.floor_checked) {
    const FloorCheckReport fr = density_floor_check(
        p.hist_t, p.hist_min_rho, p.hist_grad_u, cfg.prob.delta);
    res.floor_pass = fr.pass;
  }

  // final artifacts; a hard error still leaves a report behind
  try {
    if (res.status != "error") {
      write_snapshot((fs::path(ctx.out_dir) / kSnapshotFile).string(), s,
                     cfg.hash);
      save_checkpoint(kCheckpointFile);
    }
    std::ofstream rep((fs::path(ctx.out_dir) / kReportFile).string(),
                      std::ios::trunc);
    rep << report_json(ctx, res).dump(2) << "\n";
  } catch (const std::exception& e) {
    if (res.exit_code == 0) {
      res.status = "error";
      res.error = e.what();
      res.exit_code = 1;
    }
  }
  return res;
}

}  // namespace

std::string resolve_output_dir(const RunConfig& cfg) {
  const char* env = std::getenv("NEMFLOW_OUTPUT_DIR");
  return env && *env ? env : cfg.output_dir;
}

RunResult run(const RunConfig& cfg) {
  LoopContext ctx;
  ctx.cfg = cfg;
  ctx.out_dir = resolve_output_dir(cfg);
  ctx.fresh = true;

  try {
    State raw;
    if (cfg.from_snapshot()) {
      raw = read_snapshot(cfg.snapshot_path);
      raw.t = 0.0;
      raw.step_index = 0;
      if (!(raw.rho.grid == cfg.grid))
        throw std::invalid_argument(
            "snapshot grid does not match the configured grid");
    } else {
      raw = make_scenario(cfg.scenario, cfg.grid, cfg.scenario_params, cfg.seed);
    }
    ctx.state.t = raw.t;
    ctx.state.step_index = raw.step_index;
    ctx.state.rho = regularize_density(raw.rho, cfg.prob.delta);
    ctx.state.d = normalize_director(raw.d, &ctx.progress.initial_director_defect);
    ctx.state.u = raw.u;

    if (cfg.step.mode == SchemeMode::Galerkin) {
      fs::create_directories(ctx.out_dir);
      ctx.ws = GalerkinWorkspace::build(obtain_basis(cfg, ctx.out_dir), raw.u);
      ctx.has_ws = true;
      ctx.state.u = ctx.ws.reconstruct();
    }
  } catch (const std::exception& e) {
    RunResult res;
    res.status = "error";
    res.error = std::string("initial data: ") + e.what();
    res.exit_code = 1;
    res.output_dir = ctx.out_dir;
    return res;
  }
  return run_loop(ctx);
}

RunResult resume(const std::string& checkpoint_path) {
  LoopContext ctx;
  try {
    Checkpoint c = read_checkpoint(checkpoint_path);
    ctx.cfg = parse_config(c.canonical_config);
    if (ctx.cfg.hash != c.config_hash)
      throw std::runtime_error("checkpoint config hash mismatch");
    // the stored grid is bit-exact; the reparsed one may differ in the last
    // ulp through the lengths round trip
    ctx.cfg.grid = c.state.rho.grid;
    ctx.out_dir = resolve_output_dir(ctx.cfg);
    ctx.state = std::move(c.state);
    ctx.progress = std::move(c.progress);
    ctx.fresh = false;

    if (ctx.cfg.step.mode == SchemeMode::Galerkin) {
      fs::create_directories(ctx.out_dir);
      EigenBasis basis = obtain_basis(ctx.cfg, ctx.out_dir);
      ctx.ws = GalerkinWorkspace::build(std::move(basis), ctx.state.u);
      if (ctx.progress.galerkin_coeffs.size() == ctx.ws.coeffs.size())
        ctx.ws.coeffs = ctx.progress.galerkin_coeffs;
      else
        throw std::runtime_error("checkpoint coefficients do not fit the basis");
      ctx.has_ws = true;
    }
  } catch (const std::exception& e) {
    RunResult res;
    res.status = "error";
    res.error = std::string("resume: ") + e.what();
    res.exit_code = 1;
    return res;
  }
  return run_loop(ctx);
}

}  // namespace nemflow
