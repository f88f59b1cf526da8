#pragma once
// The Lame operator L u = mu lap(u) + (mu + lambda) grad(div u) and the
// elliptic machinery built on it: admissibility checks, the H1-orthonormal
// eigenmode basis for the spectral scheme, the elliptic solve, the Helmholtz
// split, and the pressure decomposition v = L^{-1} grad P(rho).

#include <optional>
#include <vector>

#include "nemflow/field.hpp"
#include "nemflow/linsolve.hpp"
#include "nemflow/ops.hpp"
#include "nemflow/pressure.hpp"

namespace nemflow {

struct LameParams {
  double mu = 1.0;
  double lambda = 0.0;

  // mu > 0 and 2 mu + 3 lambda >= 0
  bool admissible() const { return mu > 0.0 && 2.0 * mu + 3.0 * lambda >= 0.0; }
  // strict margin 7 mu > 9 lambda required by the breakdown criterion
  bool blowup_margin_ok() const { return 7.0 * mu > 9.0 * lambda; }
  // c0 = 5 min(mu, 4 mu - 9 (mu + lambda) / 4); positive exactly when the
  // margin holds, absent otherwise
  std::optional<double> c0() const;
};

struct ViscosityReport {
  bool admissible = false;
  bool blowup_margin_ok = false;
  std::optional<double> c0;
};

ViscosityReport check_viscosity(const LameParams& p);

VectorField apply_lame(const LameParams& p, const VectorField& u, VelocityBc bc);

// Symmetric deformation-rate tensor D(u) = (grad u + grad u^T) / 2.
SymTensorField deformation_tensor(const VectorField& u);
double sup_frobenius(const SymTensorField& t);

struct EigenMode {
  double eigenvalue = 0.0;  // of L, always <= 0
  VectorField phi;          // H1-normalized
};

struct EigenBasis {
  Grid grid;
  VelocityBc bc = VelocityBc::PeriodicProxy;
  LameParams params;
  bool analytic = false;  // closed-form mode shapes vs numerical eigensolve
  std::vector<EigenMode> modes;  // sorted by |eigenvalue|, ascending

  int count() const { return static_cast<int>(modes.size()); }
};

// First m modes.  Fully periodic grids and 1-d Dirichlet use closed-form
// trigonometric modes (eigenvalues from the continuum dispersion); other
// wall configurations assemble the discrete operator and eigensolve it.
EigenBasis eigenbasis(const LameParams& p, const Grid& g, VelocityBc bc, int m);

// Largest number of closed-form modes the grid can carry without aliasing.
int analytic_mode_budget(const Grid& g);

// L u = f.  Periodic grids require componentwise zero-mean f (the proxy
// compatibility condition); the returned u is mean-free.  Wall problems are
// pinned by the boundary condition.
VectorField solve_lame(const LameParams& p, const VectorField& f, VelocityBc bc,
                       SolveStats* stats = nullptr, double rel_tol = 1e-10,
                       int max_iter = 100000);

struct HelmholtzParts {
  ScalarField potential;  // G
  VectorField gradient;   // grad G
  VectorField solenoidal; // H = g - grad G
  SolveStats stats;
};

// g = grad G + H with div H ~ 0.  Periodic grids only; the Poisson solve
// uses the composed div(grad .) operator so the split is discretely exact up
// to the solver tolerance.
HelmholtzParts helmholtz_decompose(const VectorField& g, double rel_tol = 1e-12);

struct PressureDecomposition {
  VectorField v;  // L v = grad P(rho)
  double grad_v_l2 = 0.0;
  double grad_v_l6 = 0.0;
  double p_l2 = 0.0;
  double p_l6 = 0.0;
  SolveStats stats;
};

PressureDecomposition pressure_decompose(const LameParams& p,
                                         const PressureLaw& law,
                                         const ScalarField& rho, VelocityBc bc);

}  // namespace nemflow
