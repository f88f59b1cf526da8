#pragma once
// Conserved quantities, dissipation functionals, breakdown monitors and the
// running time integrals behind the continuation criteria.  Any non-finite
// monitor is a hard stop: the run is flagged rather than silently poisoned.

#include <stdexcept>
#include <string>

#include "nemflow/field.hpp"
#include "nemflow/state.hpp"

namespace nemflow {

struct DiagnosticsRecord {
  double t = 0.0;
  double dt = 0.0;
  long step_index = 0;
  double mass = 0.0;
  double energy = 0.0;                 // int rho |u|^2 + |grad d|^2
  double viscous_dissipation = 0.0;    // int mu |curl u|^2 + (2mu+lambda)(div u)^2
  double director_dissipation = 0.0;   // int |lap d + |grad d|^2 d|^2
  double min_rho = 0.0;
  double max_rho = 0.0;
  double sup_grad_d = 0.0;
  double sup_def_tensor = 0.0;
  double sup_grad_u = 0.0;
  double energy_residual = 0.0;        // balance defect over the last step,
                                       // relative to the dissipation scale
  double unit_drift = 0.0;             // max | |d|-1 | before renormalization
  double phi_proxy = 0.0;
  // grid momentum only: sup | L u' - forcing | over vacuum cells
  double vacuum_static_residual = 0.0;
};

// Raised when a monitored quantity leaves the finite range; carries the name
// of the first offender.
class BreakdownError : public std::runtime_error {
 public:
  BreakdownError(const std::string& quantity, double t)
      : std::runtime_error("breakdown detected at t = " + std::to_string(t) +
                           ": non-finite " + quantity),
        quantity_(quantity) {}
  const std::string& quantity() const { return quantity_; }

 private:
  std::string quantity_;
};

// Trapezoid accumulators for the time integrals in the breakdown criteria.
// All integrands are nonnegative, so every total is nondecreasing.
struct BlowupAccumulator {
  double int_grad_d_cubed = 0.0;    // int ||grad d||_inf^3 dt
  double int_grad_d_squared = 0.0;  // int ||grad d||_inf^2 dt
  double int_def_tensor = 0.0;      // int ||D(u)||_inf dt
  double int_grad_u = 0.0;          // int ||grad u||_inf dt
  double last_t = 0.0;
  double last_grad_d = 0.0;
  double last_def = 0.0;
  double last_grad_u = 0.0;
  bool has_sample = false;

  void accumulate(double t, double sup_grad_d, double sup_def, double sup_grad_u);
};

double energy(const State& s);
double viscous_dissipation(const LameParams& p, const VectorField& u);
double director_dissipation(const DirectorField& d);

struct BlowupMonitors {
  double sup_rho = 0.0;
  double sup_grad_d = 0.0;
  double sup_def_tensor = 0.0;
  double sup_grad_u = 0.0;
};
BlowupMonitors blowup_monitors(const State& s);

// Defect of the discrete energy balance over one step:
//   [E(next) - E(prev)]/dt + 2 D_total(next) - 2 int P(rho) div u (next),
// returned relative to max(2 D_total, floor).
double energy_identity_residual(const State& prev, const State& next, double dt,
                                const LameParams& lame, const PressureLaw& law,
                                double floor = 1e-12);

// Sobolev-norm proxy for the continuation functional: density in H1 and
// W^{1,q}, grad u in L2, weighted acceleration, second director derivatives
// in H1, plus one.  sqrt_rho_ut_l2 is supplied by the stepper (backward
// difference, or the compatibility datum at step zero).
double phi_proxy(const State& s, double sqrt_rho_ut_l2, double q);

// discrete material derivative (f_next - f_prev)/dt + u . grad f_next
ScalarField material_derivative(const ScalarField& f_prev,
                                const ScalarField& f_next,
                                const VectorField& u, double dt);
// Lagrangian acceleration (u_next - u_prev)/dt + u_next . grad u_next
VectorField material_derivative(const VectorField& u_prev,
                                const VectorField& u_next, double dt);

// throws BreakdownError naming the first non-finite entry
void ensure_finite(const DiagnosticsRecord& r);

}  // namespace nemflow
