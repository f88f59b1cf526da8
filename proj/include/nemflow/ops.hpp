#pragma once
// Second-order finite-difference operators on collocated fields.
//
// Stencil policy: centered differences in the interior; first derivatives
// fall back to one-sided second-order forms at Wall faces; the Laplacian uses
// one layer of reflected ghost values whose parity encodes the boundary
// condition of the consuming field (odd = homogeneous Dirichlet at the face,
// even = homogeneous Neumann).  On fully periodic grids grad and -div are
// exact discrete adjoints; wall faces give that up and the defect is left to
// the diagnostics.

#include "nemflow/field.hpp"
#include "nemflow/grid.hpp"

namespace nemflow {

enum class WallRule { Odd, Even };

// Boundary family for the velocity field.  PeriodicProxy stands in for the
// whole-space problem; Dirichlet pins u = 0 at walls; NavierSlip is the
// impermeable free-slip pair (normal component odd, tangential even), valid
// on axis-aligned boxes.
enum class VelocityBc { PeriodicProxy, Dirichlet, NavierSlip };

WallRule velocity_wall_rule(VelocityBc bc, int comp, int axis);

// d/dx_axis with one-sided closure at walls
ScalarField derivative(const ScalarField& f, int axis);
// d/dx_axis, centered through a reflected ghost layer at walls; the parity of
// the reflection follows the rule.  Odd/Even ghost-centered derivatives are
// exact discrete adjoints of each other (up to sign), which the Lame operator
// relies on at slip walls.
ScalarField derivative(const ScalarField& f, int axis, WallRule rule);
// d^2/dx_axis^2 with the same ghost closure the Laplacian uses
ScalarField second_derivative(const ScalarField& f, int axis, WallRule rule);

VectorField grad(const ScalarField& f);
ScalarField divergence(const VectorField& u);
ScalarField curl2(const VectorField& u);   // dim == 2 only
VectorField curl3(const VectorField& u);   // dim == 3 only

ScalarField laplacian(const ScalarField& f, WallRule rule);
void laplacian_into(const ScalarField& f, WallRule rule, ScalarField& out);
VectorField laplacian(const VectorField& u, VelocityBc bc);
DirectorField laplacian(const DirectorField& d);  // Neumann walls

// u . grad f, evaluated with the first-derivative stencils above
ScalarField convect(const VectorField& u, const ScalarField& f);

double integrate(const ScalarField& f);
double mean(const ScalarField& f);
void subtract_mean(ScalarField& f);
void subtract_mean(VectorField& u);

// (integral |f|^p)^(1/p); vector and director fields use the pointwise
// Euclidean magnitude.  Requires p >= 1.
double lp_norm(const ScalarField& f, double p);
double lp_norm(const VectorField& u, double p);
double lp_norm(const DirectorField& d, double p);

// grid-sample sup norms
double sup_abs(const ScalarField& f);
double sup_abs(const VectorField& u);

// pointwise |grad d|^2 = sum_{a,c} (d_a d_c)^2 and its solenoidal cousins
ScalarField grad_norm_sq(const DirectorField& d);
ScalarField grad_norm_sq(const VectorField& u);

double l2_inner(const ScalarField& a, const ScalarField& b);
double l2_inner(const VectorField& a, const VectorField& b);
// H1 inner product: <u,v> + <grad u, grad v>
double h1_inner(const VectorField& a, const VectorField& b);

// Director coupling force in the momentum balance.  Direct form
// F_a = sum_c (d_a d_c)(lap d)_c; divergence form
// F = div(grad d (x) grad d - |grad d|^2/2 I).  The two agree up to
// discretization error (exactly, in the continuum, for unit directors).
VectorField director_stress_direct(const DirectorField& d);
VectorField director_stress_divergence(const DirectorField& d);

}  // namespace nemflow
