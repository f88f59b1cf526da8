#include "nemflow/evolution.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "nemflow/initial_data.hpp"
#include "nemflow/kernels.hpp"
#include "nemflow/ops.hpp"

namespace nemflow {

namespace {

// face fluxes along one axis, stored at the lower cell of each face; the
// slot of the last cell holds the wrap face (periodic) or zero (wall)
void axis_fluxes(const ScalarField& rho, const std::vector<double>& ua,
                 int axis, std::vector<double>& flux) {
  const Grid& g = rho.grid;
  const auto& k = kernels::active();
  const std::size_t s = g.stride(axis);
  const std::size_t n = static_cast<std::size_t>(g.extents[axis]);
  const std::size_t block = n * s;
  const std::size_t nblocks = g.cells() / block;
  const double* r = rho.v.data();
  const double* u = ua.data();

  k.fill(g.cells(), 0.0, flux.data());
  for (std::size_t b = 0; b < nblocks; ++b) {
    const std::size_t base = b * block;
    k.upwind_flux((n - 1) * s, u + base, u + base + s, r + base, r + base + s,
                  flux.data() + base);
    if (g.bc[axis] == AxisBc::Periodic) {
      const std::size_t hb = base + (n - 1) * s;
      k.upwind_flux(s, u + hb, u + base, r + hb, r + base, flux.data() + hb);
    }
  }
}

}  // namespace

ScalarField step_transport(const ScalarField& rho, const VectorField& u,
                           double dt) {
  const Grid& g = rho.grid;
  if (!(u.grid == g)) throw std::invalid_argument("transport fields on mismatched grids");
  const auto& k = kernels::active();

  // positivity needs dt * sum_a max|u_a|/h_a <= 1
  double rate = 0.0;
  for (int a = 0; a < g.dim; ++a)
    rate += k.max_abs(g.cells(), u.comp[a].data()) / g.spacing[a];
  if (dt * rate > 1.0)
    throw std::invalid_argument("transport step exceeds the positivity CFL bound");

  ScalarField out = rho;
  std::vector<double> flux(g.cells());

  for (int axis = 0; axis < g.dim; ++axis) {
    axis_fluxes(rho, u.comp[axis], axis, flux);
    const double r = dt / g.spacing[axis];
    const std::size_t s = g.stride(axis);
    const std::size_t n = static_cast<std::size_t>(g.extents[axis]);
    const std::size_t block = n * s;
    const std::size_t nblocks = g.cells() / block;
    const double* F = flux.data();
    for (std::size_t b = 0; b < nblocks; ++b) {
      const std::size_t base = b * block;
      // out -= r * (F at cell - F below); first slab's lower face is the
      // wrap slot (periodic) or a zero-flux wall
      k.stencil3_acc((n - 1) * s, r, F + base, -r, F + base + s, 0.0, F + base,
                     out.v.data() + base + s);
      if (g.bc[axis] == AxisBc::Periodic) {
        const std::size_t hb = base + (n - 1) * s;
        k.stencil3_acc(s, r, F + hb, -r, F + base, 0.0, F + base,
                       out.v.data() + base);
      } else {
        k.add_scaled(s, -r, F + base, out.v.data() + base);
      }
    }
  }
  return out;
}

DirectorStepResult step_director(const DirectorField& d, const VectorField& u,
                                 double dt, bool renormalize) {
  const Grid& g = d.grid;
  if (!(u.grid == g)) throw std::invalid_argument("director/velocity grids mismatch");
  const std::size_t n = g.cells();
  const auto& k = kernels::active();

  ScalarField q = grad_norm_sq(d);

  // inverse diagonal of I + dt * (-lap); interior value, used everywhere
  double diag = 1.0;
  for (int a = 0; a < g.dim; ++a) diag += dt * 2.0 / (g.spacing[a] * g.spacing[a]);
  std::vector<double> jacobi(n, 1.0 / diag);

  ScalarField xs(g), lap(g);
  LinOp A = [&](const std::vector<double>& x, std::vector<double>& out) {
    std::copy(x.begin(), x.end(), xs.v.begin());
    laplacian_into(xs, WallRule::Even, lap);
    // out = x - dt * lap x
    k.axpby(n, 1.0, x.data(), -dt, lap.v.data(), out.data());
  };

  DirectorStepResult res;
  res.d = DirectorField(g);
  for (int c = 0; c < 3; ++c) {
    // rhs = d_c + dt * (q d_c - u . grad d_c)
    ScalarField dc(g, d.comp[c]);
    ScalarField adv = convect(u, dc);
    std::vector<double> rhs(n);
    k.mul(n, q.v.data(), dc.v.data(), rhs.data());
    k.add_scaled(n, -1.0, adv.v.data(), rhs.data());
    k.axpby(n, 1.0, dc.v.data(), dt, rhs.data(), rhs.data());

    std::vector<double> x(n, 0.0);
    SolveStats st = cg(A, rhs, x, 1e-12, 100000, &jacobi);
    if (!st.converged)
      throw std::runtime_error("director diffusion solve did not converge");
    res.stats.iterations += st.iterations;
    res.stats.rel_residual = std::max(res.stats.rel_residual, st.rel_residual);
    res.stats.converged = true;
    res.d.comp[c] = std::move(x);
  }

  if (renormalize) {
    // collapse check first: projecting back to the sphere is only a small
    // correction while |d|^2 stays above 1/2; below that the step has
    // destroyed the constraint and renormalizing would manufacture direction
    for (std::size_t i = 0; i < n; ++i) {
      const double m2 = res.d.comp[0][i] * res.d.comp[0][i] +
                        res.d.comp[1][i] * res.d.comp[1][i] +
                        res.d.comp[2][i] * res.d.comp[2][i];
      if (!(m2 > 0.5))
        throw std::runtime_error("director magnitude collapsed during the step");
    }
    res.pre_projection_drift = k.normalize3(n, res.d.comp[0].data(),
                                            res.d.comp[1].data(),
                                            res.d.comp[2].data());
  } else {
    double drift = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double m = std::sqrt(res.d.comp[0][i] * res.d.comp[0][i] +
                                 res.d.comp[1][i] * res.d.comp[1][i] +
                                 res.d.comp[2][i] * res.d.comp[2][i]);
      drift = std::max(drift, std::abs(m - 1.0));
    }
    res.pre_projection_drift = drift;
  }
  return res;
}

GalerkinWorkspace GalerkinWorkspace::build(EigenBasis basis,
                                           const VectorField& u0) {
  GalerkinWorkspace ws;
  ws.basis = std::move(basis);
  const int m = ws.basis.count();
  if (m < 1) throw std::invalid_argument("spectral scheme needs at least one mode");
  ws.coeffs = project_velocity(u0, ws.basis, m);
  const int dim = ws.basis.grid.dim;
  ws.div_phi.reserve(static_cast<std::size_t>(m));
  for (const auto& mode : ws.basis.modes) {
    ws.div_phi.push_back(divergence(mode.phi));
    if (dim == 2) ws.curl2_phi.push_back(curl2(mode.phi));
    if (dim == 3) ws.curl3_phi.push_back(curl3(mode.phi));
  }
  return ws;
}

VectorField GalerkinWorkspace::reconstruct() const {
  return reconstruct_velocity(basis, coeffs);
}

std::vector<double> assemble_mass_matrix(const ScalarField& rho,
                                         const EigenBasis& basis, int m) {
  if (m < 1 || m > basis.count())
    throw std::invalid_argument("mass matrix order exceeds available modes");
  const Grid& g = rho.grid;
  const std::size_t n = g.cells();
  const double vol = g.cell_volume();
  const auto& k = kernels::active();

  std::vector<double> M(static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const auto& pi = basis.modes[static_cast<std::size_t>(i)].phi;
    for (int j = i; j < m; ++j) {
      const auto& pj = basis.modes[static_cast<std::size_t>(j)].phi;
      double v = 0.0;
      for (int c = 0; c < g.dim; ++c)
        v += k.wdot(n, rho.v.data(), pi.comp[c].data(), pj.comp[c].data());
      v *= vol;
      M[static_cast<std::size_t>(i) * m + j] = v;
      M[static_cast<std::size_t>(j) * m + i] = v;
    }
  }
  return M;
}

namespace {

// rho (u.grad)u + grad P + director stress in divergence form; the momentum
// forcing is the negative of this
VectorField momentum_load(const ScalarField& rho, const VectorField& u,
                          const DirectorField& d, const PressureLaw& law) {
  const Grid& g = rho.grid;
  const std::size_t n = g.cells();
  const auto& k = kernels::active();

  VectorField G = grad(law.eval_p(rho));
  VectorField stress = director_stress_divergence(d);
  std::vector<double> weighted(n);
  for (int c = 0; c < g.dim; ++c) {
    k.add_scaled(n, 1.0, stress.comp[c].data(), G.comp[c].data());
    ScalarField uc(g, u.comp[c]);
    ScalarField adv = convect(u, uc);
    k.mul(n, rho.v.data(), adv.v.data(), weighted.data());
    k.add_scaled(n, 1.0, weighted.data(), G.comp[c].data());
  }
  return G;
}

}  // namespace

std::vector<double> momentum_rhs(const GalerkinWorkspace& ws,
                                 const ScalarField& rho, const VectorField& u,
                                 const DirectorField& d, const LameParams& lame,
                                 const PressureLaw& law) {
  const Grid& g = rho.grid;
  const int m = ws.mode_count();
  VectorField G = momentum_load(rho, u, d, law);

  ScalarField div_u = divergence(u);
  ScalarField curl2_u;
  VectorField curl3_u;
  if (g.dim == 2) curl2_u = curl2(u);
  if (g.dim == 3) curl3_u = curl3(u);

  const double bulk = 2.0 * lame.mu + lame.lambda;
  std::vector<double> F(static_cast<std::size_t>(m));
  for (int kk = 0; kk < m; ++kk) {
    const std::size_t ki = static_cast<std::size_t>(kk);
    double visc = bulk * l2_inner(div_u, ws.div_phi[ki]);
    if (g.dim == 2) visc += lame.mu * l2_inner(curl2_u, ws.curl2_phi[ki]);
    if (g.dim == 3) visc += lame.mu * l2_inner(curl3_u, ws.curl3_phi[ki]);
    F[ki] = -l2_inner(G, ws.basis.modes[ki].phi) - visc;
  }
  return F;
}

void step_momentum_galerkin(GalerkinWorkspace& ws, const ScalarField& rho,
                            const DirectorField& d, double dt,
                            const LameParams& lame, const PressureLaw& law) {
  const int m = ws.mode_count();
  std::vector<double> Mrow = assemble_mass_matrix(rho, ws.basis, m);
  Eigen::Map<const Eigen::MatrixXd> M(Mrow.data(), m, m);
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error(
        "spectral mass matrix is not positive definite; density too close to vacuum");

  auto f = [&](const std::vector<double>& c) {
    VectorField uc = reconstruct_velocity(ws.basis, c);
    std::vector<double> F = momentum_rhs(ws, rho, uc, d, lame, law);
    Eigen::Map<const Eigen::VectorXd> Fv(F.data(), m);
    Eigen::VectorXd kv = llt.solve(Fv);
    return std::vector<double>(kv.data(), kv.data() + m);
  };
  auto shifted = [&](const std::vector<double>& c, double a,
                     const std::vector<double>& k) {
    std::vector<double> out = c;
    for (int i = 0; i < m; ++i) out[static_cast<std::size_t>(i)] += a * k[static_cast<std::size_t>(i)];
    return out;
  };

  const std::vector<double> c0 = ws.coeffs;
  const auto k1 = f(c0);
  const auto k2 = f(shifted(c0, 0.5 * dt, k1));
  const auto k3 = f(shifted(c0, 0.5 * dt, k2));
  const auto k4 = f(shifted(c0, dt, k3));
  for (int i = 0; i < m; ++i) {
    const std::size_t ii = static_cast<std::size_t>(i);
    ws.coeffs[ii] =
        c0[ii] + dt / 6.0 * (k1[ii] + 2.0 * k2[ii] + 2.0 * k3[ii] + k4[ii]);
  }
}

GridMomentumResult step_momentum_grid(const ScalarField& rho,
                                      const VectorField& u,
                                      const DirectorField& d, double dt,
                                      const ProblemSetup& prob,
                                      double vacuum_eps) {
  const Grid& g = rho.grid;
  const std::size_t n = g.cells();
  const std::size_t dim = static_cast<std::size_t>(g.dim);
  const auto& k = kernels::active();
  const LameParams& lame = prob.lame;

  VectorField G = momentum_load(rho, u, d, prob.law);

  // (rho I + dt (-L)) u' = rho u - dt G
  std::vector<double> b(dim * n);
  for (std::size_t c = 0; c < dim; ++c) {
    double* bc = b.data() + c * n;
    k.mul(n, rho.v.data(), u.comp[c].data(), bc);
    k.add_scaled(n, -dt, G.comp[c].data(), bc);
  }

  VectorField ux(g);
  LinOp A = [&](const std::vector<double>& x, std::vector<double>& out) {
    unflatten(x, ux);
    VectorField Lx = apply_lame(lame, ux, prob.bc);
    for (std::size_t c = 0; c < dim; ++c) {
      k.mul(n, rho.v.data(), x.data() + c * n, out.data() + c * n);
      k.add_scaled(n, -dt, Lx.comp[c].data(), out.data() + c * n);
    }
  };

  GridMomentumResult res;
  std::vector<double> x(dim * n, 0.0);
  if (prob.bc == VelocityBc::PeriodicProxy) {
    std::vector<double> jacobi(dim * n);
    double lap_diag = 0.0;
    for (int a = 0; a < g.dim; ++a) lap_diag += 2.0 / (g.spacing[a] * g.spacing[a]);
    for (std::size_t c = 0; c < dim; ++c) {
      const double dc = dt * (lame.mu * lap_diag +
                              (lame.mu + lame.lambda) * 2.0 /
                                  (g.spacing[c] * g.spacing[c]));
      for (std::size_t i = 0; i < n; ++i) jacobi[c * n + i] = 1.0 / (rho.v[i] + dc);
    }
    res.stats = cg(A, b, x, 1e-10, 100000, &jacobi);
  } else {
    res.stats = bicgstab(A, b, x, 1e-10, 100000);
  }
  if (!res.stats.converged)
    throw std::runtime_error("momentum solve did not converge");

  res.u = VectorField(g);
  unflatten(x, res.u);

  // on vacuum cells the update degenerates to the static balance L u' = G
  VectorField Lu = apply_lame(lame, res.u, prob.bc);
  double sup = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (rho.v[i] > vacuum_eps) continue;
    for (std::size_t c = 0; c < dim; ++c)
      sup = std::max(sup, std::abs(Lu.comp[c][i] - G.comp[c][i]));
  }
  res.vacuum_static_residual = sup;
  return res;
}

double stable_dt(const State& s, const StepConfig& cfg, const ProblemSetup& prob,
                 const GalerkinWorkspace* ws) {
  if (!(cfg.dt_max > 0.0)) throw std::invalid_argument("dt_max must be positive");
  if (!(cfg.cfl > 0.0)) throw std::invalid_argument("cfl must be positive");
  const Grid& g = s.rho.grid;
  const std::size_t n = g.cells();
  const auto& k = kernels::active();
  double dt = cfg.dt_max;

  const bool any_stage =
      cfg.evolve_transport || cfg.evolve_momentum || cfg.evolve_director;
  if (any_stage) {
    double cs = 0.0;
    if (cfg.evolve_momentum) {
      const double rmax = std::max(0.0, k.max_val(n, s.rho.v.data()));
      cs = std::sqrt(std::max(0.0, prob.law.lipschitz_bound(rmax)));
    }
    double rate = 0.0;
    for (int a = 0; a < g.dim; ++a)
      rate += (k.max_abs(n, s.u.comp[a].data()) + cs) / g.spacing[a];
    if (rate > 0.0) dt = std::min(dt, cfg.cfl / rate);
  }
  if (cfg.evolve_director) {
    const double h = g.min_spacing();
    dt = std::min(dt, cfg.diffusion_number * h * h);
  }
  if (cfg.evolve_momentum && cfg.mode == SchemeMode::Galerkin && ws &&
      ws->mode_count() > 0) {
    double smax = 0.0;
    for (const auto& mode : ws->basis.modes)
      smax = std::max(smax, std::abs(mode.eigenvalue));
    const double rho_min = std::max(k.min_val(n, s.rho.v.data()), 1e-12);
    // RK4 real-axis stability radius ~ 2.785, with margin
    if (smax > 0.0) dt = std::min(dt, 2.5 * rho_min / smax);
  }
  return dt;
}

StepResult advance(const State& s, const StepConfig& cfg,
                   const ProblemSetup& prob, GalerkinWorkspace* ws) {
  const Grid& g = s.rho.grid;
  const std::size_t n = g.cells();
  const auto& k = kernels::active();
  const double dt = stable_dt(s, cfg, prob, ws);

  State next = s;
  double vacuum_residual = 0.0;
  auto with_stage = [](const char* stage, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      throw std::runtime_error(std::string(stage) + " stage: " + e.what());
    }
  };
  if (cfg.evolve_transport)
    with_stage("transport", [&] { next.rho = step_transport(s.rho, s.u, dt); });
  if (cfg.evolve_momentum) {
    with_stage("momentum", [&] {
      if (cfg.mode == SchemeMode::Galerkin) {
        if (!ws) throw std::invalid_argument("spectral stepping needs a workspace");
        step_momentum_galerkin(*ws, next.rho, s.d, dt, prob.lame, prob.law);
        next.u = ws->reconstruct();
      } else {
        GridMomentumResult r =
            step_momentum_grid(next.rho, s.u, s.d, dt, prob, cfg.vacuum_eps);
        next.u = std::move(r.u);
        vacuum_residual = r.vacuum_static_residual;
      }
    });
  }
  double drift;
  if (cfg.evolve_director) {
    DirectorStepResult r;
    with_stage("director", [&] {
      r = step_director(s.d, next.u, dt, cfg.renormalize_director);
    });
    next.d = std::move(r.d);
    drift = r.pre_projection_drift;
  } else {
    drift = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double m = std::sqrt(next.d.comp[0][i] * next.d.comp[0][i] +
                                 next.d.comp[1][i] * next.d.comp[1][i] +
                                 next.d.comp[2][i] * next.d.comp[2][i]);
      drift = std::max(drift, std::abs(m - 1.0));
    }
  }
  next.t = s.t + dt;
  next.step_index = s.step_index + 1;

  DiagnosticsRecord rec;
  rec.t = next.t;
  rec.dt = dt;
  rec.step_index = next.step_index;
  rec.mass = integrate(next.rho);
  rec.energy = energy(next);
  rec.viscous_dissipation = viscous_dissipation(prob.lame, next.u);
  rec.director_dissipation = director_dissipation(next.d);
  rec.min_rho = k.min_val(n, next.rho.v.data());
  BlowupMonitors mon = blowup_monitors(next);
  rec.max_rho = mon.sup_rho;
  rec.sup_grad_d = mon.sup_grad_d;
  rec.sup_def_tensor = mon.sup_def_tensor;
  rec.sup_grad_u = mon.sup_grad_u;
  rec.energy_residual = energy_identity_residual(s, next, dt, prob.lame, prob.law);
  rec.unit_drift = drift;
  rec.vacuum_static_residual = vacuum_residual;

  // weighted acceleration by backward difference over this step
  double w2 = 0.0;
  std::vector<double> ut(n);
  for (int c = 0; c < g.dim; ++c) {
    k.axpby(n, 1.0 / dt, next.u.comp[c].data(), -1.0 / dt, s.u.comp[c].data(),
            ut.data());
    w2 += k.wdot(n, next.rho.v.data(), ut.data(), ut.data());
  }
  const double sqrt_rho_ut = std::sqrt(std::max(0.0, g.cell_volume() * w2));
  rec.phi_proxy = phi_proxy(next, sqrt_rho_ut, 6.0);

  ensure_finite(rec);
  return {std::move(next), rec};
}

FloorCheckReport density_floor_check(std::span<const double> t,
                                     std::span<const double> min_rho,
                                     std::span<const double> sup_grad_u,
                                     double delta, double tol) {
  if (t.size() != min_rho.size() || t.size() != sup_grad_u.size())
    throw std::invalid_argument("floor check needs equally long histories");
  FloorCheckReport rep;
  double integral = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i > 0)
      integral += 0.5 * (sup_grad_u[i] + sup_grad_u[i - 1]) * (t[i] - t[i - 1]);
    const double barrier = (1.0 - tol) * delta * std::exp(-integral);
    const bool ok = min_rho[i] >= barrier;
    rep.rows.push_back({t[i], min_rho[i], barrier, ok});
    rep.pass = rep.pass && ok;
  }
  return rep;
}

}  // namespace nemflow
