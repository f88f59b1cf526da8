#pragma once
// Simulation state and the fixed per-run problem description.

#include "nemflow/field.hpp"
#include "nemflow/lame.hpp"
#include "nemflow/pressure.hpp"

namespace nemflow {

struct State {
  double t = 0.0;
  long step_index = 0;
  ScalarField rho;
  VectorField u;
  DirectorField d;
};

enum class SchemeMode { Grid, Galerkin };

struct StepConfig {
  SchemeMode mode = SchemeMode::Grid;
  int m = 16;                      // Galerkin mode count
  double cfl = 0.5;
  double dt_max = 0.05;
  double diffusion_number = 0.5;
  bool renormalize_director = true;
  double vacuum_eps = 1e-10;
  // stage switches; reduced problems (pure director flow, frozen density)
  // turn stages off rather than faking coefficients
  bool evolve_transport = true;
  bool evolve_momentum = true;
  bool evolve_director = true;
};

struct ProblemSetup {
  LameParams lame;
  PressureLaw law = PressureLaw::isentropic(1.0, 1.4);
  VelocityBc bc = VelocityBc::PeriodicProxy;
  double delta = 0.0;  // density regularization shift actually applied
};

}  // namespace nemflow
