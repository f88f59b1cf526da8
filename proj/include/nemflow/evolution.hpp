#pragma once
// Time stepping: Lie splitting transport -> momentum -> director.  Momentum
// runs either as a spectral scheme on the Lame eigenbasis (explicit RK4 on
// the mass-matrix ODE system, density frozen within the step) or as a
// semi-implicit grid scheme (backward Euler on L, everything else explicit).

#include <span>
#include <vector>

#include "nemflow/diagnostics.hpp"
#include "nemflow/field.hpp"
#include "nemflow/lame.hpp"
#include "nemflow/state.hpp"

namespace nemflow {

struct GalerkinWorkspace {
  EigenBasis basis;
  std::vector<double> coeffs;
  // cached mode derivatives for the viscous bilinear form
  std::vector<ScalarField> div_phi;
  std::vector<ScalarField> curl2_phi;   // dim == 2
  std::vector<VectorField> curl3_phi;   // dim == 3

  static GalerkinWorkspace build(EigenBasis basis, const VectorField& u0);
  int mode_count() const { return basis.count(); }
  VectorField reconstruct() const;
};

// conservative first-order upwind transport; wall faces carry zero flux
ScalarField step_transport(const ScalarField& rho, const VectorField& u, double dt);

struct DirectorStepResult {
  DirectorField d;
  double pre_projection_drift = 0.0;
  SolveStats stats;
};
// backward-Euler diffusion, explicit advection and reaction, then pointwise
// renormalization (optional but on by default)
DirectorStepResult step_director(const DirectorField& d, const VectorField& u,
                                 double dt, bool renormalize);

// M_ik = int rho phi_i . phi_k over the first m modes, row-major m x m
std::vector<double> assemble_mass_matrix(const ScalarField& rho,
                                         const EigenBasis& basis, int m);

// Galerkin right-hand side: F_k = -(rho u.grad u, phi_k) - (grad P, phi_k)
// - (director stress, phi_k) - viscous bilinear form of (u, phi_k)
std::vector<double> momentum_rhs(const GalerkinWorkspace& ws,
                                 const ScalarField& rho, const VectorField& u,
                                 const DirectorField& d, const LameParams& lame,
                                 const PressureLaw& law);

// one explicit RK4 step of M(rho) c' = F with rho (and d) frozen
void step_momentum_galerkin(GalerkinWorkspace& ws, const ScalarField& rho,
                            const DirectorField& d, double dt,
                            const LameParams& lame, const PressureLaw& law);

struct GridMomentumResult {
  VectorField u;
  SolveStats stats;
  double vacuum_static_residual = 0.0;  // sup | L u' + forcing | on vacuum cells
};
GridMomentumResult step_momentum_grid(const ScalarField& rho,
                                      const VectorField& u,
                                      const DirectorField& d, double dt,
                                      const ProblemSetup& prob,
                                      double vacuum_eps);

// admissible step size: advective + acoustic CFL, the explicit parabolic
// budget diffusion_number * dx_min^2, the RK4 stiffness bound in Galerkin
// mode, and dt_max
double stable_dt(const State& s, const StepConfig& cfg, const ProblemSetup& prob,
                 const GalerkinWorkspace* ws);

struct StepResult {
  State state;
  DiagnosticsRecord record;
};
// One full step.  The record's weighted-acceleration norm uses the backward
// difference of u over this step; the t = 0 record (compatibility datum) is
// the caller's job.
StepResult advance(const State& s, const StepConfig& cfg,
                   const ProblemSetup& prob, GalerkinWorkspace* ws);

// Checks a recorded trajectory against the exponential lower barrier
// delta * exp(-int ||grad u||_inf dt), with multiplicative slack tol.
struct FloorCheckRow {
  double t;
  double min_rho;
  double barrier;
  bool ok;
};
struct FloorCheckReport {
  bool pass = true;
  std::vector<FloorCheckRow> rows;
};
FloorCheckReport density_floor_check(std::span<const double> t,
                                     std::span<const double> min_rho,
                                     std::span<const double> sup_grad_u,
                                     double delta, double tol = 0.1);

}  // namespace nemflow
