#pragma once
// Admissible initial data: nonnegative density (optionally lifted off vacuum
// by delta), unit director, and a velocity consistent with the elliptic
// compatibility balance L u0 = sqrt(rho0) g + grad P(rho0) + (grad d0) lap d0,
// which pins the initial acceleration in weighted L2.

#include <vector>

#include "nemflow/field.hpp"
#include "nemflow/lame.hpp"
#include "nemflow/pressure.hpp"

namespace nemflow {

// rho0 + delta; rejects negative input densities and negative delta
ScalarField regularize_density(const ScalarField& rho0, double delta);

// throws when a director vector cannot be normalized (magnitude ~ 0);
// defect, when given, receives max | |d| - 1 | before projection
DirectorField normalize_director(const DirectorField& d, double* defect = nullptr);

struct CompatVelocity {
  VectorField u0;
  SolveStats stats;
  // componentwise mean removed from the right-hand side on the periodic
  // proxy, relative to its rms; large values mean the data was inconsistent
  double projected_mean_defect = 0.0;
};

// Solves the compatibility balance for u0.  On the periodic proxy the
// right-hand side is projected to zero mean; a defect above mean_tol is an
// error (the torus cannot balance a net force).
CompatVelocity solve_compatibility(const ScalarField& rho0_delta,
                                   const DirectorField& d0,
                                   const VectorField& g,
                                   const LameParams& lame,
                                   const PressureLaw& law, VelocityBc bc,
                                   double mean_tol = 1e-2);

struct CompatResidualReport {
  VectorField g;                     // recovered datum on non-vacuum cells
  double residual_sup_vacuum = 0.0;  // sup |r| where rho <= vacuum_eps
};

// Recovers g = (L u0 - grad P(rho0) - (grad d0) lap d0) / sqrt(rho0) on
// non-vacuum cells; on vacuum cells the numerator must vanish and its sup is
// reported instead.
CompatResidualReport compat_residual(const ScalarField& rho0,
                                     const VectorField& u0,
                                     const DirectorField& d0,
                                     const LameParams& lame,
                                     const PressureLaw& law, VelocityBc bc,
                                     double vacuum_eps = 1e-10);

// H1 coefficients of u against the first m basis modes
std::vector<double> project_velocity(const VectorField& u,
                                     const EigenBasis& basis, int m);

VectorField reconstruct_velocity(const EigenBasis& basis,
                                 const std::vector<double>& coeffs);

}  // namespace nemflow
