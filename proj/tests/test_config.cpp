// Config parsing: defaults, validation messages, hashing, canonical round
// trips, and the merge order for stage flags (explicit > scenario > default).

#include <doctest.h>

#include <stdexcept>
#include <string>

#include "nemflow/config.hpp"

using namespace nemflow;

namespace {

const char* kMinimal = R"({
  "grid": {"extents": [64]},
  "initial": {"scenario": "equilibrium"}
})";

std::string what_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("configuration") {

TEST_CASE("a minimal config fills every default") {
  const RunConfig cfg = parse_config(kMinimal);

  CHECK(cfg.grid.dim == 1);
  CHECK(cfg.grid.extents[0] == 64);
  CHECK(cfg.grid.length(0) == doctest::Approx(6.283185307179586).epsilon(1e-15));
  CHECK(cfg.grid.origin[0] == 0.0);
  CHECK(cfg.grid.periodic(0));
  CHECK(cfg.prob.bc == VelocityBc::PeriodicProxy);

  CHECK(cfg.prob.lame.mu == 1.0);
  CHECK(cfg.prob.lame.lambda == 0.0);
  CHECK(cfg.blowup_margin_ok);

  CHECK(cfg.prob.law.kind() == PressureLaw::Kind::Isentropic);
  CHECK(cfg.prob.law.coeff_a() == 1.0);
  CHECK(cfg.prob.law.gamma() == 1.4);

  CHECK(cfg.step.mode == SchemeMode::Grid);
  CHECK(cfg.step.m == 16);
  CHECK(cfg.step.cfl == 0.5);
  CHECK(cfg.step.dt_max == 0.05);
  CHECK(cfg.step.diffusion_number == 0.5);
  CHECK(cfg.step.renormalize_director);
  CHECK(cfg.step.evolve_transport);
  CHECK(cfg.step.evolve_momentum);
  CHECK(cfg.step.evolve_director);

  CHECK(cfg.prob.delta == 0.0);  // grid mode: no vacuum shift
  CHECK(cfg.t_end == 1.0);
  CHECK(cfg.max_steps == -1);
  CHECK(cfg.output_stride == 1);
  CHECK(cfg.checkpoint_stride == 0);
  CHECK(cfg.output_dir == "out");
  CHECK(cfg.seed == 0);
  CHECK(cfg.hash != 0);
}

TEST_CASE("admissible but margin-free viscosity is accepted with a flag") {
  // 2*1 + 3*1 >= 0 holds, 7*1 > 9*1 does not
  const RunConfig cfg = parse_config(R"({
    "grid": {"extents": [16]},
    "viscosity": {"mu": 1.0, "lambda": 1.0},
    "initial": {"scenario": "equilibrium"}
  })");
  CHECK_FALSE(cfg.blowup_margin_ok);
  CHECK(!cfg.prob.lame.c0().has_value());
}

TEST_CASE("viscosity rejections carry the field path") {
  CHECK(what_of(R"({"grid": {"extents": [16]},
                    "viscosity": {"mu": 0.0},
                    "initial": {"scenario": "equilibrium"}})") ==
        "config.viscosity.mu: shear viscosity must be positive");
  CHECK(what_of(R"({"grid": {"extents": [16]},
                    "viscosity": {"mu": 1.0, "lambda": -0.7},
                    "initial": {"scenario": "equilibrium"}})") ==
        "config.viscosity: needs 2*mu + 3*lambda >= 0");
}

TEST_CASE("pressure law validation") {
  CHECK(what_of(R"({"grid": {"extents": [16]},
                    "pressure": {"kind": "isentropic", "gamma": 1.0},
                    "initial": {"scenario": "equilibrium"}})") ==
        "config.pressure.gamma: adiabatic exponent must exceed 1");
  CHECK(what_of(R"({"grid": {"extents": [16]},
                    "pressure": {"kind": "isentropic", "a": -2.0},
                    "initial": {"scenario": "equilibrium"}})") ==
        "config.pressure.a: pressure coefficient must be positive");
  CHECK(what_of(R"({"grid": {"extents": [16]},
                    "pressure": {"kind": "polytropic"},
                    "initial": {"scenario": "equilibrium"}})") ==
        "config.pressure.kind: expected \"isentropic\" or \"tabulated\"");

  const RunConfig tab = parse_config(R"({
    "grid": {"extents": [16]},
    "pressure": {"kind": "tabulated", "rho": [0.0, 1.0, 2.0], "p": [0.0, 1.0, 3.0]},
    "initial": {"scenario": "equilibrium"}
  })");
  CHECK(tab.prob.law.kind() == PressureLaw::Kind::Tabulated);
  CHECK(tab.prob.law.eval_p(1.5) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("mixed face pairs on one axis are rejected") {
  CHECK(what_of(R"({"grid": {"extents": [16], "bc": [["periodic", "wall"]]},
                    "initial": {"scenario": "equilibrium"}})") ==
        "config.grid.bc[0]: mixed periodic/wall faces on axis 0 are not supported");
}

TEST_CASE("unknown keys are rejected at every level") {
  CHECK(what_of(R"({"grid": {"extents": [16]}, "turbo": true,
                    "initial": {"scenario": "equilibrium"}})") ==
        "config.turbo: unknown key");
  CHECK(what_of(R"({"grid": {"extents": [16], "spacing": 0.1},
                    "initial": {"scenario": "equilibrium"}})") ==
        "config.grid.spacing: unknown key");
  CHECK(what_of(R"({"grid": {"extents": [16]},
                    "step": {"order": 2},
                    "initial": {"scenario": "equilibrium"}})") ==
        "config.step.order: unknown key");
  CHECK(what_of(R"({"grid": {"extents": [16]},
                    "output": {"format": "csv"},
                    "initial": {"scenario": "equilibrium"}})") ==
        "config.output.format: unknown key");
  CHECK(what_of(R"({"grid": {"extents": [16]},
                    "viscosity": {"mu": 1.0, "bulk": 0.0},
                    "initial": {"scenario": "equilibrium"}})") ==
        "config.viscosity.bulk: unknown key");
}

TEST_CASE("initial data source must be exactly one of scenario or snapshot") {
  CHECK(what_of(R"({"grid": {"extents": [16]}, "initial": {}})") ==
        "config.initial: needs exactly one of \"scenario\" or \"snapshot\"");
  CHECK(what_of(R"({"grid": {"extents": [16]},
                    "initial": {"scenario": "equilibrium", "snapshot": "x.nfs"}})") ==
        "config.initial: needs exactly one of \"scenario\" or \"snapshot\"");

  const RunConfig cfg = parse_config(R"({
    "grid": {"extents": [16]},
    "initial": {"snapshot": "fields.nfs"}
  })");
  CHECK(cfg.from_snapshot());
  CHECK(cfg.snapshot_path == "fields.nfs");
  CHECK(cfg.scenario.empty());
}

TEST_CASE("boundary family constraints") {
  // proxy family on a wall grid names the offending axis
  CHECK(what_of(R"({"grid": {"extents": [16, 16], "bc": ["periodic", "wall"]},
                    "boundary_family": "CauchyPeriodicProxy",
                    "initial": {"scenario": "equilibrium"}})") ==
        "config.boundary_family: CauchyPeriodicProxy needs every axis periodic; "
        "axis 1 is a wall");
  // wall families on an all-periodic grid have no wall to act on
  CHECK(what_of(R"({"grid": {"extents": [16]},
                    "boundary_family": "DirichletNeumann",
                    "initial": {"scenario": "equilibrium"}})") ==
        "config.boundary_family: DirichletNeumann needs at least one wall axis");
  // scenario pins the family; an explicit conflicting choice is an error
  CHECK(what_of(R"({"grid": {"extents": [16, 16], "bc": ["periodic", "wall"]},
                    "boundary_family": "DirichletNeumann",
                    "initial": {"scenario": "shear-navier-slip"}})") ==
        "config.boundary_family: scenario \"shear-navier-slip\" needs the "
        "NavierSlipNeumann family");

  // derivation when the key is absent: walls present -> Dirichlet
  const RunConfig walls = parse_config(R"({
    "grid": {"extents": [16, 16], "bc": ["periodic", "wall"]},
    "initial": {"scenario": "equilibrium"}
  })");
  CHECK(walls.prob.bc == VelocityBc::Dirichlet);

  // scenario requirement fills the gap and appends its note
  const RunConfig shear = parse_config(R"({
    "grid": {"extents": [16, 16], "bc": ["periodic", "wall"]},
    "initial": {"scenario": "shear-navier-slip"}
  })");
  CHECK(shear.prob.bc == VelocityBc::NavierSlip);
  CHECK(shear.notes.find("slip walls") != std::string::npos);
}

TEST_CASE("scenario dimension requirements are enforced") {
  CHECK(what_of(R"({"grid": {"extents": [16, 16]},
                    "initial": {"scenario": "acoustic-1d"}})") ==
        "config.initial.scenario: scenario \"acoustic-1d\" needs a 1-d grid");
  CHECK(what_of(R"({"grid": {"extents": [16]},
                    "initial": {"scenario": "nonsense"}})") ==
        "config.initial.scenario: unknown scenario \"nonsense\"");
}

TEST_CASE("spectral mode requires a positive vacuum shift") {
  const RunConfig cfg = parse_config(R"({
    "grid": {"extents": [16]},
    "step": {"mode": "galerkin"},
    "initial": {"scenario": "equilibrium"}
  })");
  CHECK(cfg.prob.delta == 1e-3);  // default shift in spectral mode

  CHECK(what_of(R"({"grid": {"extents": [16]},
                    "step": {"mode": "galerkin"},
                    "delta": 0.0,
                    "initial": {"scenario": "equilibrium"}})") ==
        "config.delta: spectral mode needs a positive vacuum shift");
}

TEST_CASE("stage flags merge explicit > scenario > default") {
  // director-heat-1d recommends transport/momentum off
  const RunConfig rec = parse_config(R"({
    "grid": {"extents": [32]},
    "initial": {"scenario": "director-heat-1d"}
  })");
  CHECK_FALSE(rec.step.evolve_transport);
  CHECK_FALSE(rec.step.evolve_momentum);
  CHECK(rec.step.evolve_director);

  // an explicit key overrides the recommendation
  const RunConfig forced = parse_config(R"({
    "grid": {"extents": [32]},
    "step": {"evolve_momentum": true},
    "initial": {"scenario": "director-heat-1d"}
  })");
  CHECK(forced.step.evolve_momentum);
  CHECK_FALSE(forced.step.evolve_transport);
}

TEST_CASE("config hash ignores formatting and tracks content") {
  const RunConfig a = parse_config(kMinimal);
  const RunConfig b = parse_config(
      "{\"initial\":{\"scenario\":\"equilibrium\"},"
      "\"grid\":{\"extents\":[64]}}");
  CHECK(a.hash == b.hash);

  const RunConfig c = parse_config(R"({
    "grid": {"extents": [64]},
    "viscosity": {"mu": 2.0},
    "initial": {"scenario": "equilibrium"}
  })");
  CHECK(a.hash != c.hash);

  // canonical text reparses to the same hash (resume relies on this)
  const RunConfig again = parse_config(canonical_config(a));
  CHECK(again.hash == a.hash);

  const RunConfig shear = parse_config(R"({
    "grid": {"extents": [16, 16], "bc": ["periodic", "wall"]},
    "initial": {"scenario": "shear-navier-slip", "params": {"u_max": 2.0}}
  })");
  const RunConfig shear2 = parse_config(canonical_config(shear));
  CHECK(shear2.hash == shear.hash);
  CHECK(shear2.prob.bc == VelocityBc::NavierSlip);
  CHECK(shear2.scenario_params.at("u_max") == 2.0);
}

TEST_CASE("malformed json and non-object roots are caught early") {
  CHECK(what_of("{oops").rfind("config is not valid JSON", 0) == 0);
  CHECK(what_of("[1, 2]") == "config: expected a JSON object");
  CHECK(what_of(R"({"initial": {"scenario": "equilibrium"}})") ==
        "config.grid: required");
}

TEST_CASE("step parameter ranges") {
  CHECK(what_of(R"({"grid": {"extents": [16]},
                    "step": {"cfl": 1.5},
                    "initial": {"scenario": "equilibrium"}})") ==
        "config.step.cfl: must lie in (0, 1]");
  CHECK(what_of(R"({"grid": {"extents": [16]},
                    "step": {"dt_max": 0.0},
                    "initial": {"scenario": "equilibrium"}})") ==
        "config.step.dt_max: must be positive");
  CHECK(what_of(R"({"grid": {"extents": [16]},
                    "step": {"m": 0, "mode": "galerkin"},
                    "initial": {"scenario": "equilibrium"}})") ==
        "config.step.m: needs at least one mode");
  CHECK(what_of(R"({"grid": {"extents": [16]},
                    "t_end": -1.0,
                    "initial": {"scenario": "equilibrium"}})") ==
        "config.t_end: must be positive");
  CHECK(what_of(R"({"grid": {"extents": [16]},
                    "max_steps": -2,
                    "initial": {"scenario": "equilibrium"}})") ==
        "config.max_steps: must be -1 (unbounded) or >= 0");
}

TEST_CASE("grids need at least four cells per axis") {
  const std::string msg = what_of(R"({"grid": {"extents": [3]},
                                      "initial": {"scenario": "equilibrium"}})");
  CHECK(msg.rfind("config.grid.extents[0]:", 0) == 0);
}

}  // TEST_SUITE
