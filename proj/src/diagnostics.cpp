#include "nemflow/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

#include "nemflow/ops.hpp"

namespace nemflow {

using kernels::active;

void BlowupAccumulator::accumulate(double t, double sup_grad_d, double sup_def,
                                   double sup_grad_u) {
  if (has_sample) {
    if (t < last_t)
      throw std::invalid_argument(
          "accumulator samples must advance in time");
    const double dt = t - last_t;
    int_grad_d_cubed +=
        0.5 * dt * (sup_grad_d * sup_grad_d * sup_grad_d +
                    last_grad_d * last_grad_d * last_grad_d);
    int_grad_d_squared +=
        0.5 * dt * (sup_grad_d * sup_grad_d + last_grad_d * last_grad_d);
    int_def_tensor += 0.5 * dt * (sup_def + last_def);
    int_grad_u += 0.5 * dt * (sup_grad_u + last_grad_u);
  }
  last_t = t;
  last_grad_d = sup_grad_d;
  last_def = sup_def;
  last_grad_u = sup_grad_u;
  has_sample = true;
}

double energy(const State& s) {
  const std::size_t n = s.rho.size();
  double kin = 0.0;
  for (int c = 0; c < s.u.components(); ++c)
    kin += active().wdot(n, s.rho.data(), s.u.data(c), s.u.data(c));
  const ScalarField g2 = grad_norm_sq(s.d);
  return s.rho.grid.cell_volume() * kin + integrate(g2);
}

double viscous_dissipation(const LameParams& p, const VectorField& u) {
  const double two_mu_lambda = 2.0 * p.mu + p.lambda;
  const ScalarField dv = divergence(u);
  double total = two_mu_lambda * active().sum_abs_pow(dv.size(), dv.data(), 2.0);
  if (u.grid.dim == 2) {
    const ScalarField w = curl2(u);
    total += p.mu * active().sum_abs_pow(w.size(), w.data(), 2.0);
  } else if (u.grid.dim == 3) {
    const VectorField w = curl3(u);
    for (int c = 0; c < 3; ++c)
      total += p.mu * active().sum_abs_pow(w.size(), w.data(c), 2.0);
  }
  return u.grid.cell_volume() * total;
}

double director_dissipation(const DirectorField& d) {
  const DirectorField ld = laplacian(d);
  const ScalarField q = grad_norm_sq(d);
  const std::size_t n = d.size();
  std::vector<double> tmp(n);
  double total = 0.0;
  for (int c = 0; c < 3; ++c) {
    // lap d + |grad d|^2 d, one component at a time
    active().mul(n, q.data(), d.data(c), tmp.data());
    active().add_scaled(n, 1.0, ld.data(c), tmp.data());
    total += active().sum_abs_pow(n, tmp.data(), 2.0);
  }
  return d.grid.cell_volume() * total;
}

BlowupMonitors blowup_monitors(const State& s) {
  BlowupMonitors m;
  m.sup_rho = active().max_val(s.rho.size(), s.rho.data());
  const ScalarField gd2 = grad_norm_sq(s.d);
  m.sup_grad_d = std::sqrt(active().max_val(gd2.size(), gd2.data()));
  m.sup_def_tensor = sup_frobenius(deformation_tensor(s.u));
  const ScalarField gu2 = grad_norm_sq(s.u);
  m.sup_grad_u = std::sqrt(active().max_val(gu2.size(), gu2.data()));
  return m;
}

double energy_identity_residual(const State& prev, const State& next, double dt,
                                const LameParams& lame, const PressureLaw& law,
                                double floor) {
  const double dE = (energy(next) - energy(prev)) / dt;
  const double dissipation =
      viscous_dissipation(lame, next.u) + director_dissipation(next.d);
  const ScalarField P = law.eval_p(next.rho);
  const ScalarField dv = divergence(next.u);
  const double work = l2_inner(P, dv);
  const double raw = dE + 2.0 * dissipation - 2.0 * work;
  return std::fabs(raw) / std::fmax(2.0 * dissipation, floor);
}

namespace {

// L2 norm of all mixed second (and optionally third) derivatives of d
void director_hessian_norms(const DirectorField& d, double* h2_l2, double* h3_l2) {
  const int dim = d.grid.dim;
  double s2 = 0.0, s3 = 0.0;
  for (int c = 0; c < 3; ++c) {
    const ScalarField dc{d.grid, d.comp[c]};
    for (int a = 0; a < dim; ++a) {
      const ScalarField da = derivative(dc, a);
      for (int b = 0; b < dim; ++b) {
        const ScalarField dab = derivative(da, b);
        s2 += active().sum_abs_pow(dab.size(), dab.data(), 2.0);
        for (int e = 0; e < dim; ++e) {
          const ScalarField dabe = derivative(dab, e);
          s3 += active().sum_abs_pow(dabe.size(), dabe.data(), 2.0);
        }
      }
    }
  }
  const double vol = d.grid.cell_volume();
  *h2_l2 = std::sqrt(vol * s2);
  *h3_l2 = std::sqrt(vol * s3);
}

}  // namespace

double phi_proxy(const State& s, double sqrt_rho_ut_l2, double q) {
  const VectorField grho = grad(s.rho);
  double norm_rho = lp_norm(s.rho, 2.0) + lp_norm(grho, 2.0);
  if (q != 2.0) norm_rho += lp_norm(s.rho, q) + lp_norm(grho, q);
  const ScalarField gu2 = grad_norm_sq(s.u);
  const double grad_u_l2 =
      std::sqrt(s.rho.grid.cell_volume() *
                active().sum_abs_pow(gu2.size(), gu2.data(), 1.0));
  double h2 = 0.0, h3 = 0.0;
  director_hessian_norms(s.d, &h2, &h3);
  return norm_rho + grad_u_l2 + sqrt_rho_ut_l2 + (h2 + h3) + 1.0;
}

ScalarField material_derivative(const ScalarField& f_prev,
                                const ScalarField& f_next,
                                const VectorField& u, double dt) {
  ScalarField out = convect(u, f_next);
  const std::size_t n = out.size();
  std::vector<double> diff(n);
  active().axpby(n, 1.0 / dt, f_next.data(), -1.0 / dt, f_prev.data(), diff.data());
  active().add_scaled(n, 1.0, diff.data(), out.data());
  return out;
}

VectorField material_derivative(const VectorField& u_prev,
                                const VectorField& u_next, double dt) {
  const Grid& g = u_next.grid;
  VectorField out(g);
  for (int c = 0; c < g.dim; ++c) {
    const ScalarField uc{g, u_next.comp[c]};
    const ScalarField prev{g, u_prev.comp[c]};
    out.comp[c] = material_derivative(prev, uc, u_next, dt).v;
  }
  return out;
}

void ensure_finite(const DiagnosticsRecord& r) {
  const struct {
    const char* name;
    double value;
  } entries[] = {
      {"mass", r.mass},
      {"energy", r.energy},
      {"viscous_dissipation", r.viscous_dissipation},
      {"director_dissipation", r.director_dissipation},
      {"min_rho", r.min_rho},
      {"max_rho", r.max_rho},
      {"sup_grad_d", r.sup_grad_d},
      {"sup_def_tensor", r.sup_def_tensor},
      {"sup_grad_u", r.sup_grad_u},
      {"energy_residual", r.energy_residual},
      {"unit_drift", r.unit_drift},
      {"phi_proxy", r.phi_proxy},
      {"vacuum_static_residual", r.vacuum_static_residual},
  };
  for (const auto& e : entries)
    if (!std::isfinite(e.value)) throw BreakdownError(e.name, r.t);
}

}  // namespace nemflow
