#include "nemflow/config.hpp"

#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace nemflow {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw std::invalid_argument("config." + path + ": " + msg);
}

void check_keys(const json& obj, const std::string& path,
                const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      fail(path.empty() ? it.key() : path + "." + it.key(), "unknown key");
}

const json* find(const json& obj, const std::string& key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double number_at(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

double number_or(const json& obj, const std::string& key,
                 const std::string& path, double fallback) {
  const json* j = find(obj, key);
  return j ? number_at(*j, path + "." + key) : fallback;
}

long integer_at(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<long>();
}

bool bool_at(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected true or false");
  return j.get<bool>();
}

std::string string_at(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

AxisBc axis_bc_at(const json& j, const std::string& path) {
  const std::string s = string_at(j, path);
  if (s == "periodic") return AxisBc::Periodic;
  if (s == "wall") return AxisBc::Wall;
  fail(path, "expected \"periodic\" or \"wall\"");
}

Grid parse_grid(const json& j) {
  if (!j.is_object()) fail("grid", "expected an object");
  check_keys(j, "grid", {"extents", "lengths", "origin", "bc"});

  const json* ext = find(j, "extents");
  if (!ext || !ext->is_array() || ext->empty() || ext->size() > 3)
    fail("grid.extents", "expected an array of 1 to 3 cell counts");
  const int dim = static_cast<int>(ext->size());

  std::array<int, 3> extents{1, 1, 1};
  for (int a = 0; a < dim; ++a) {
    const long e = integer_at((*ext)[a], "grid.extents[" + std::to_string(a) + "]");
    if (e < 4) fail("grid.extents[" + std::to_string(a) + "]",
                    "needs at least 4 cells");
    extents[a] = static_cast<int>(e);
  }

  std::array<double, 3> lengths{1.0, 1.0, 1.0};
  for (int a = 0; a < dim; ++a) lengths[a] = 2.0 * std::numbers::pi;
  if (const json* len = find(j, "lengths")) {
    if (!len->is_array() || static_cast<int>(len->size()) != dim)
      fail("grid.lengths", "expected one length per axis");
    for (int a = 0; a < dim; ++a) {
      lengths[a] = number_at((*len)[a], "grid.lengths[" + std::to_string(a) + "]");
      if (!(lengths[a] > 0.0))
        fail("grid.lengths[" + std::to_string(a) + "]", "must be positive");
    }
  }

  std::array<double, 3> origin{0.0, 0.0, 0.0};
  if (const json* org = find(j, "origin")) {
    if (!org->is_array() || static_cast<int>(org->size()) != dim)
      fail("grid.origin", "expected one coordinate per axis");
    for (int a = 0; a < dim; ++a)
      origin[a] = number_at((*org)[a], "grid.origin[" + std::to_string(a) + "]");
  }

  std::array<AxisBc, 3> bc{AxisBc::Periodic, AxisBc::Periodic, AxisBc::Periodic};
  if (const json* b = find(j, "bc")) {
    if (!b->is_array() || static_cast<int>(b->size()) != dim)
      fail("grid.bc", "expected one entry per axis");
    for (int a = 0; a < dim; ++a) {
      const std::string path = "grid.bc[" + std::to_string(a) + "]";
      const json& e = (*b)[a];
      if (e.is_array()) {
        // a [low, high] face pair is accepted only when both faces agree
        if (e.size() != 2) fail(path, "face pair needs exactly two entries");
        const AxisBc lo = axis_bc_at(e[0], path + "[0]");
        const AxisBc hi = axis_bc_at(e[1], path + "[1]");
        if (lo != hi)
          fail(path, "mixed periodic/wall faces on axis " + std::to_string(a) +
                         " are not supported");
        bc[a] = lo;
      } else {
        bc[a] = axis_bc_at(e, path);
      }
    }
  }

  try {
    return Grid::make(dim, extents, lengths, origin, bc);
  } catch (const std::exception& e) {
    fail("grid", e.what());
  }
}

PressureLaw parse_pressure(const json* j) {
  if (!j) return PressureLaw::isentropic(1.0, 1.4);
  if (!j->is_object()) fail("pressure", "expected an object");
  const std::string kind =
      find(*j, "kind") ? string_at(*find(*j, "kind"), "pressure.kind")
                       : std::string("isentropic");
  try {
    if (kind == "isentropic") {
      check_keys(*j, "pressure", {"kind", "a", "gamma"});
      const double a = number_or(*j, "a", "pressure", 1.0);
      const double gamma = number_or(*j, "gamma", "pressure", 1.4);
      if (!(a > 0.0)) fail("pressure.a", "pressure coefficient must be positive");
      if (!(gamma > 1.0))
        fail("pressure.gamma", "adiabatic exponent must exceed 1");
      return PressureLaw::isentropic(a, gamma);
    }
    if (kind == "tabulated") {
      check_keys(*j, "pressure", {"kind", "rho", "p"});
      const json* r = find(*j, "rho");
      const json* p = find(*j, "p");
      if (!r || !p || !r->is_array() || !p->is_array())
        fail("pressure", "tabulated law needs \"rho\" and \"p\" arrays");
      std::vector<double> rv, pv;
      for (std::size_t i = 0; i < r->size(); ++i)
        rv.push_back(number_at((*r)[i], "pressure.rho[" + std::to_string(i) + "]"));
      for (std::size_t i = 0; i < p->size(); ++i)
        pv.push_back(number_at((*p)[i], "pressure.p[" + std::to_string(i) + "]"));
      return PressureLaw::tabulated(std::move(rv), std::move(pv));
    }
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    if (what.rfind("config.", 0) == 0) throw;
    fail("pressure", what);
  }
  fail("pressure.kind", "expected \"isentropic\" or \"tabulated\"");
}

VelocityBc parse_family(const std::string& s) {
  if (s == "CauchyPeriodicProxy") return VelocityBc::PeriodicProxy;
  if (s == "DirichletNeumann") return VelocityBc::Dirichlet;
  if (s == "NavierSlipNeumann") return VelocityBc::NavierSlip;
  fail("boundary_family",
       "expected \"CauchyPeriodicProxy\", \"DirichletNeumann\" or "
       "\"NavierSlipNeumann\"");
}

const char* family_name(VelocityBc bc) {
  switch (bc) {
    case VelocityBc::PeriodicProxy: return "CauchyPeriodicProxy";
    case VelocityBc::Dirichlet: return "DirichletNeumann";
    default: return "NavierSlipNeumann";
  }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw std::invalid_argument("config: expected a JSON object");
  check_keys(root, "",
             {"grid", "boundary_family", "viscosity", "pressure", "step",
              "initial", "delta", "t_end", "max_steps", "output", "seed"});

  RunConfig cfg;
  const json* gj = find(root, "grid");
  if (!gj) fail("grid", "required");
  cfg.grid = parse_grid(*gj);

  // viscosity: shear coefficient positive, bulk relation nonnegative
  if (const json* v = find(root, "viscosity")) {
    if (!v->is_object()) fail("viscosity", "expected an object");
    check_keys(*v, "viscosity", {"mu", "lambda"});
    cfg.prob.lame.mu = number_or(*v, "mu", "viscosity", 1.0);
    cfg.prob.lame.lambda = number_or(*v, "lambda", "viscosity", 0.0);
  }
  if (!(cfg.prob.lame.mu > 0.0))
    fail("viscosity.mu", "shear viscosity must be positive");
  if (2.0 * cfg.prob.lame.mu + 3.0 * cfg.prob.lame.lambda < 0.0)
    fail("viscosity", "needs 2*mu + 3*lambda >= 0");
  cfg.blowup_margin_ok = cfg.prob.lame.blowup_margin_ok();

  cfg.prob.law = parse_pressure(find(root, "pressure"));

  // initial data source
  const json* init = find(root, "initial");
  if (!init) fail("initial", "required");
  if (!init->is_object()) fail("initial", "expected an object");
  check_keys(*init, "initial", {"scenario", "params", "snapshot"});
  const json* scen = find(*init, "scenario");
  const json* snap = find(*init, "snapshot");
  if (!!scen == !!snap)
    fail("initial", "needs exactly one of \"scenario\" or \"snapshot\"");
  ScenarioTraits traits;
  if (scen) {
    cfg.scenario = string_at(*scen, "initial.scenario");
    traits = scenario_traits(cfg.scenario);
    if (!traits.known) fail("initial.scenario", "unknown scenario \"" + cfg.scenario + "\"");
    if (traits.required_dim != 0 && traits.required_dim != cfg.grid.dim)
      fail("initial.scenario", "scenario \"" + cfg.scenario + "\" needs a " +
                                   std::to_string(traits.required_dim) + "-d grid");
    if (const json* pp = find(*init, "params")) {
      if (!pp->is_object()) fail("initial.params", "expected an object");
      for (auto it = pp->begin(); it != pp->end(); ++it)
        cfg.scenario_params[it.key()] =
            number_at(it.value(), "initial.params." + it.key());
    }
  } else {
    cfg.scenario.clear();
    cfg.snapshot_path = string_at(*snap, "initial.snapshot");
    if (cfg.snapshot_path.empty()) fail("initial.snapshot", "empty path");
  }

  // boundary family: explicit, else scenario requirement, else grid-derived
  const bool all_periodic = !cfg.grid.any_wall();
  if (const json* fam = find(root, "boundary_family")) {
    cfg.prob.bc = parse_family(string_at(*fam, "boundary_family"));
  } else if (traits.required_bc) {
    cfg.prob.bc = *traits.required_bc;
  } else {
    cfg.prob.bc = all_periodic ? VelocityBc::PeriodicProxy : VelocityBc::Dirichlet;
  }
  if (cfg.prob.bc == VelocityBc::PeriodicProxy && !all_periodic) {
    for (int a = 0; a < cfg.grid.dim; ++a)
      if (!cfg.grid.periodic(a))
        fail("boundary_family", "CauchyPeriodicProxy needs every axis periodic; "
                                "axis " + std::to_string(a) + " is a wall");
  }
  if (cfg.prob.bc != VelocityBc::PeriodicProxy && all_periodic)
    fail("boundary_family",
         std::string(family_name(cfg.prob.bc)) + " needs at least one wall axis");
  if (traits.required_bc && cfg.prob.bc != *traits.required_bc)
    fail("boundary_family", "scenario \"" + cfg.scenario + "\" needs the " +
                                family_name(*traits.required_bc) + " family");
  if (cfg.prob.bc == VelocityBc::NavierSlip) {
    if (!cfg.notes.empty()) cfg.notes += "; ";
    cfg.notes += "slip walls assume an axis-aligned simply connected box";
  }

  // stepping: explicit keys win over scenario stage recommendations
  cfg.step = StepConfig{};
  const json* st = find(root, "step");
  if (st && !st->is_object()) fail("step", "expected an object");
  if (st)
    check_keys(*st, "step",
               {"mode", "m", "cfl", "dt_max", "diffusion_number",
                "renormalize_director", "vacuum_eps", "evolve_transport",
                "evolve_momentum", "evolve_director"});
  if (st && find(*st, "mode")) {
    const std::string mode = string_at(*find(*st, "mode"), "step.mode");
    if (mode == "grid") cfg.step.mode = SchemeMode::Grid;
    else if (mode == "galerkin") cfg.step.mode = SchemeMode::Galerkin;
    else fail("step.mode", "expected \"grid\" or \"galerkin\"");
  }
  if (st) {
    if (const json* m = find(*st, "m")) {
      const long mm = integer_at(*m, "step.m");
      if (mm < 1) fail("step.m", "needs at least one mode");
      cfg.step.m = static_cast<int>(mm);
    }
    cfg.step.cfl = number_or(*st, "cfl", "step", cfg.step.cfl);
    cfg.step.dt_max = number_or(*st, "dt_max", "step", cfg.step.dt_max);
    cfg.step.diffusion_number =
        number_or(*st, "diffusion_number", "step", cfg.step.diffusion_number);
    cfg.step.vacuum_eps = number_or(*st, "vacuum_eps", "step", cfg.step.vacuum_eps);
    if (const json* b = find(*st, "renormalize_director"))
      cfg.step.renormalize_director = bool_at(*b, "step.renormalize_director");
  }
  if (!(cfg.step.cfl > 0.0 && cfg.step.cfl <= 1.0))
    fail("step.cfl", "must lie in (0, 1]");
  if (!(cfg.step.dt_max > 0.0)) fail("step.dt_max", "must be positive");
  if (!(cfg.step.diffusion_number > 0.0))
    fail("step.diffusion_number", "must be positive");
  if (!(cfg.step.vacuum_eps >= 0.0)) fail("step.vacuum_eps", "must be nonnegative");

  auto stage = [&](const char* key, std::optional<bool> trait, bool fallback) {
    if (st)
      if (const json* b = find(*st, key))
        return bool_at(*b, std::string("step.") + key);
    return trait.value_or(fallback);
  };
  cfg.step.evolve_transport = stage("evolve_transport", traits.transport, true);
  cfg.step.evolve_momentum = stage("evolve_momentum", traits.momentum, true);
  cfg.step.evolve_director = stage("evolve_director", traits.director, true);

  // vacuum shift: spectral mode needs the density bounded away from zero
  cfg.prob.delta = cfg.step.mode == SchemeMode::Galerkin ? 1e-3 : 0.0;
  if (const json* d = find(root, "delta")) {
    cfg.prob.delta = number_at(*d, "delta");
    if (cfg.prob.delta < 0.0) fail("delta", "must be nonnegative");
  }
  if (cfg.step.mode == SchemeMode::Galerkin && !(cfg.prob.delta > 0.0))
    fail("delta", "spectral mode needs a positive vacuum shift");

  if (const json* t = find(root, "t_end")) cfg.t_end = number_at(*t, "t_end");
  if (!(cfg.t_end > 0.0)) fail("t_end", "must be positive");
  if (const json* ms = find(root, "max_steps")) {
    cfg.max_steps = integer_at(*ms, "max_steps");
    if (cfg.max_steps < -1) fail("max_steps", "must be -1 (unbounded) or >= 0");
  }

  if (const json* out = find(root, "output")) {
    if (!out->is_object()) fail("output", "expected an object");
    check_keys(*out, "output", {"dir", "stride", "checkpoint_stride"});
    if (const json* d = find(*out, "dir"))
      cfg.output_dir = string_at(*d, "output.dir");
    if (const json* s = find(*out, "stride")) {
      cfg.output_stride = integer_at(*s, "output.stride");
      if (cfg.output_stride < 1) fail("output.stride", "must be >= 1");
    }
    if (const json* c = find(*out, "checkpoint_stride")) {
      cfg.checkpoint_stride = integer_at(*c, "output.checkpoint_stride");
      if (cfg.checkpoint_stride < 0) fail("output.checkpoint_stride", "must be >= 0");
    }
  }
  if (const json* s = find(root, "seed")) {
    const long v = integer_at(*s, "seed");
    if (v < 0) fail("seed", "must be nonnegative");
    cfg.seed = static_cast<std::uint64_t>(v);
  }

  cfg.hash = fnv1a(canonical_config(cfg));
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string canonical_config(const RunConfig& cfg) {
  json j;
  json grid;
  for (int a = 0; a < cfg.grid.dim; ++a) {
    grid["extents"].push_back(cfg.grid.extents[a]);
    grid["lengths"].push_back(cfg.grid.length(a));
    grid["origin"].push_back(cfg.grid.origin[a]);
    grid["bc"].push_back(cfg.grid.periodic(a) ? "periodic" : "wall");
  }
  j["grid"] = grid;
  j["boundary_family"] = family_name(cfg.prob.bc);
  j["viscosity"] = {{"mu", cfg.prob.lame.mu}, {"lambda", cfg.prob.lame.lambda}};
  if (cfg.prob.law.kind() == PressureLaw::Kind::Isentropic) {
    j["pressure"] = {{"kind", "isentropic"},
                     {"a", cfg.prob.law.coeff_a()},
                     {"gamma", cfg.prob.law.gamma()}};
  } else {
    j["pressure"] = {{"kind", "tabulated"},
                     {"rho", cfg.prob.law.rho_nodes()},
                     {"p", cfg.prob.law.p_nodes()}};
  }
  j["step"] = {{"mode", cfg.step.mode == SchemeMode::Galerkin ? "galerkin" : "grid"},
               {"m", cfg.step.m},
               {"cfl", cfg.step.cfl},
               {"dt_max", cfg.step.dt_max},
               {"diffusion_number", cfg.step.diffusion_number},
               {"renormalize_director", cfg.step.renormalize_director},
               {"vacuum_eps", cfg.step.vacuum_eps},
               {"evolve_transport", cfg.step.evolve_transport},
               {"evolve_momentum", cfg.step.evolve_momentum},
               {"evolve_director", cfg.step.evolve_director}};
  if (cfg.from_snapshot()) {
    j["initial"] = {{"snapshot", cfg.snapshot_path}};
  } else {
    json params = json::object();
    for (const auto& [k, v] : cfg.scenario_params) params[k] = v;
    j["initial"] = {{"scenario", cfg.scenario}, {"params", params}};
  }
  j["delta"] = cfg.prob.delta;
  j["t_end"] = cfg.t_end;
  j["max_steps"] = cfg.max_steps;
  j["output"] = {{"dir", cfg.output_dir},
                 {"stride", cfg.output_stride},
                 {"checkpoint_stride", cfg.checkpoint_stride}};
  j["seed"] = cfg.seed;
  return j.dump();
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace nemflow
