#include "nemflow/scenario.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace nemflow {

namespace {

double get(const ScenarioParams& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

void require_dim(const Grid& g, int dim, const std::string& name) {
  if (g.dim != dim)
    throw std::invalid_argument("scenario \"" + name + "\" needs a " +
                                std::to_string(dim) + "-d grid");
}

// seeded cellwise noise in [-1, 1], deterministic in (seed, cell order)
void add_noise(ScalarField& f, double amp, std::uint64_t seed) {
  if (amp == 0.0) return;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto& v : f.v) v += amp * u(rng);
}

State equilibrium(const Grid& g, const ScenarioParams& p) {
  State s;
  s.rho = ScalarField::from_fn(g, [&](double, double, double) {
    return get(p, "rho", 1.0);
  });
  s.u = VectorField(g);
  s.d = DirectorField::from_fn(g, [](double, double, double) {
    return std::array<double, 3>{0.0, 0.0, 1.0};
  });
  return s;
}

State acoustic_1d(const Grid& g, const ScenarioParams& p, std::uint64_t seed) {
  const double amp = get(p, "amplitude", 0.1);
  const double k = get(p, "wavenumber", 1.0);
  const double base = get(p, "rho", 1.0);
  const double two_pi_over_l = 2.0 * std::numbers::pi / g.length(0);
  State s;
  s.rho = ScalarField::from_fn(g, [&](double x, double, double) {
    return base + amp * std::sin(k * two_pi_over_l * (x - g.origin[0]));
  });
  add_noise(s.rho, get(p, "noise", 0.0), seed);
  for (double v : s.rho.v)
    if (!(v >= 0.0))
      throw std::invalid_argument("acoustic perturbation drives the density negative");
  s.u = VectorField(g);
  s.d = DirectorField::from_fn(g, [](double, double, double) {
    return std::array<double, 3>{0.0, 0.0, 1.0};
  });
  return s;
}

// planar director d = (cos theta, sin theta, 0), theta = amplitude * sin(x);
// with frozen density and velocity the angle obeys the 1-d heat equation
State director_heat_1d(const Grid& g, const ScenarioParams& p) {
  const double amp = get(p, "amplitude", 1.0);
  const double two_pi_over_l = 2.0 * std::numbers::pi / g.length(0);
  State s;
  s.rho = ScalarField::from_fn(g, [](double, double, double) { return 1.0; });
  s.u = VectorField(g);
  s.d = DirectorField::from_fn(g, [&](double x, double, double) {
    const double theta = amp * std::sin(two_pi_over_l * (x - g.origin[0]));
    return std::array<double, 3>{std::cos(theta), std::sin(theta), 0.0};
  });
  return s;
}

// compactly supported density: smooth bump of radius w about the domain
// center, zero outside, so a genuine vacuum annulus surrounds it
State vacuum_bump(const Grid& g, const ScenarioParams& p) {
  const double peak = get(p, "peak", 1.0);
  double center[3], radius = get(p, "radius", 0.0);
  for (int a = 0; a < g.dim; ++a) {
    center[a] = g.origin[a] + 0.5 * g.length(a);
    if (radius == 0.0) radius = 0.25 * g.length(a);
  }
  State s;
  s.rho = ScalarField::from_fn(g, [&](double x, double y, double z) {
    const double q[3] = {x, y, z};
    double r2 = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      const double dx = (q[a] - center[a]) / radius;
      r2 += dx * dx;
    }
    if (r2 >= 1.0) return 0.0;
    return peak * std::exp(1.0 - 1.0 / (1.0 - r2));
  });
  s.u = VectorField(g);
  s.d = DirectorField::from_fn(g, [](double, double, double) {
    return std::array<double, 3>{0.0, 0.0, 1.0};
  });
  return s;
}

// tight planar winding: |grad d| = winding * 2 pi / L everywhere, made as
// steep as the caller likes; the stress it exerts feeds the monitors
State winding_defect(const Grid& g, const ScenarioParams& p, std::uint64_t seed) {
  const double winding = get(p, "winding", 8.0);
  const double two_pi_over_l = 2.0 * std::numbers::pi / g.length(0);
  State s;
  s.rho = ScalarField::from_fn(g, [&](double, double, double) {
    return get(p, "rho", 1.0);
  });
  add_noise(s.rho, get(p, "noise", 0.0), seed);
  for (auto& v : s.rho.v) v = std::max(v, 0.0);
  s.u = VectorField(g);
  s.d = DirectorField::from_fn(g, [&](double x, double, double) {
    const double theta = winding * two_pi_over_l * (x - g.origin[0]);
    return std::array<double, 3>{std::cos(theta), std::sin(theta), 0.0};
  });
  return s;
}

// 2-d shear: periodic along x, impermeable slip walls along y; the profile
// has zero normal velocity and zero tangential shear at both walls
State shear_navier_slip(const Grid& g, const ScenarioParams& p) {
  const double umax = get(p, "u_max", 1.0);
  const double h = g.length(1);
  State s;
  s.rho = ScalarField::from_fn(g, [&](double, double, double) {
    return get(p, "rho", 1.0);
  });
  s.u = VectorField::from_fn(g, [&](double, double y, double) {
    return std::array<double, 3>{
        umax * std::cos(std::numbers::pi * (y - g.origin[1]) / h), 0.0, 0.0};
  });
  s.d = DirectorField::from_fn(g, [](double, double, double) {
    return std::array<double, 3>{0.0, 0.0, 1.0};
  });
  return s;
}

}  // namespace

ScenarioTraits scenario_traits(const std::string& name) {
  ScenarioTraits t;
  if (name == "equilibrium" || name == "vacuum-bump") {
    t.known = true;
  } else if (name == "acoustic-1d") {
    t.known = true;
    t.required_dim = 1;
  } else if (name == "director-heat-1d") {
    t.known = true;
    t.required_dim = 1;
    t.transport = false;
    t.momentum = false;
    t.director = true;
  } else if (name == "winding-defect") {
    t.known = true;
    t.required_dim = 1;
  } else if (name == "shear-navier-slip") {
    t.known = true;
    t.required_dim = 2;
    t.required_bc = VelocityBc::NavierSlip;
    t.note = "slip walls assume an axis-aligned simply connected box";
  }
  return t;
}

std::vector<std::string> scenario_names() {
  return {"equilibrium",    "acoustic-1d",    "director-heat-1d",
          "vacuum-bump",    "winding-defect", "shear-navier-slip"};
}

State make_scenario(const std::string& name, const Grid& g,
                    const ScenarioParams& params, std::uint64_t seed) {
  const ScenarioTraits traits = scenario_traits(name);
  if (!traits.known)
    throw std::invalid_argument("unknown scenario \"" + name + "\"");
  if (traits.required_dim != 0) require_dim(g, traits.required_dim, name);

  State s;
  if (name == "equilibrium") s = equilibrium(g, params);
  else if (name == "acoustic-1d") s = acoustic_1d(g, params, seed);
  else if (name == "director-heat-1d") s = director_heat_1d(g, params);
  else if (name == "vacuum-bump") s = vacuum_bump(g, params);
  else if (name == "winding-defect") s = winding_defect(g, params, seed);
  else s = shear_navier_slip(g, params);
  s.t = 0.0;
  s.step_index = 0;
  return s;
}

}  // namespace nemflow
