#include "nemflow/initial_data.hpp"

#include <cmath>
#include <stdexcept>

#include "nemflow/kernels.hpp"
#include "nemflow/ops.hpp"

namespace nemflow {

ScalarField regularize_density(const ScalarField& rho0, double delta) {
  if (delta < 0.0) throw std::invalid_argument("density lift delta must be nonnegative");
  const std::size_t n = rho0.v.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!(rho0.v[i] >= 0.0))
      throw std::invalid_argument("initial density must be nonnegative and finite");
  }
  ScalarField out = rho0;
  if (delta > 0.0) {
    const auto& k = kernels::active();
    ScalarField ones(rho0.grid);
    k.fill(n, 1.0, ones.v.data());
    k.add_scaled(n, delta, ones.v.data(), out.v.data());
  }
  return out;
}

DirectorField normalize_director(const DirectorField& d, double* defect) {
  DirectorField out = d;
  const std::size_t n = d.grid.cells();
  // a direction recovered from |d|^2 <= 1/2 is numerically meaningless; the
  // check runs before projection, which would happily rescale any nonzero
  // vector to unit length
  for (std::size_t i = 0; i < n; ++i) {
    const double m2 = out.comp[0][i] * out.comp[0][i] +
                      out.comp[1][i] * out.comp[1][i] +
                      out.comp[2][i] * out.comp[2][i];
    if (!(m2 > 0.5))
      throw std::invalid_argument("director field has a cell with near-zero magnitude");
  }
  double drift = kernels::active().normalize3(n, out.comp[0].data(),
                                              out.comp[1].data(),
                                              out.comp[2].data());
  if (defect) *defect = drift;
  return out;
}

namespace {

// L u0 = rhs with rhs = sqrt(rho) g + grad P + (grad d) lap d
VectorField compat_rhs(const ScalarField& rho, const DirectorField& d,
                       const VectorField& g, const PressureLaw& law) {
  const Grid& gr = rho.grid;
  const std::size_t n = gr.cells();
  const auto& k = kernels::active();

  ScalarField p = law.eval_p(rho);
  VectorField rhs = grad(p);
  VectorField stress = director_stress_direct(d);

  std::vector<double> sqrt_rho(n);
  for (std::size_t i = 0; i < n; ++i) sqrt_rho[i] = std::sqrt(rho.v[i]);

  for (int c = 0; c < gr.dim; ++c) {
    k.add_scaled(n, 1.0, stress.comp[c].data(), rhs.comp[c].data());
    std::vector<double> weighted(n);
    k.mul(n, sqrt_rho.data(), g.comp[c].data(), weighted.data());
    k.add_scaled(n, 1.0, weighted.data(), rhs.comp[c].data());
  }
  return rhs;
}

}  // namespace

CompatVelocity solve_compatibility(const ScalarField& rho0_delta,
                                   const DirectorField& d0,
                                   const VectorField& g,
                                   const LameParams& lame,
                                   const PressureLaw& law, VelocityBc bc,
                                   double mean_tol) {
  const Grid& gr = rho0_delta.grid;
  VectorField rhs = compat_rhs(rho0_delta, d0, g, law);

  CompatVelocity out{VectorField(gr), SolveStats{}, 0.0};
  if (bc == VelocityBc::PeriodicProxy) {
    // remove any net force; record how much was removed relative to rms
    const std::size_t n = gr.cells();
    const double volume = gr.cell_volume() * static_cast<double>(n);
    const auto& k = kernels::active();
    double mean_sq = 0.0;
    for (int c = 0; c < gr.dim; ++c) {
      const double mc = k.sum(n, rhs.comp[c].data()) / static_cast<double>(n);
      mean_sq += mc * mc;
    }
    const double l2 = lp_norm(rhs, 2.0);
    double rms = l2 / std::sqrt(volume);
    double mean_mag = std::sqrt(mean_sq);
    out.projected_mean_defect = (rms > 0.0) ? mean_mag / rms : mean_mag;
    if (out.projected_mean_defect > mean_tol)
      throw std::invalid_argument(
          "compatibility datum carries a net force the periodic proxy cannot balance");
    subtract_mean(rhs);
  }
  out.u0 = solve_lame(lame, rhs, bc, &out.stats);
  return out;
}

CompatResidualReport compat_residual(const ScalarField& rho0,
                                     const VectorField& u0,
                                     const DirectorField& d0,
                                     const LameParams& lame,
                                     const PressureLaw& law, VelocityBc bc,
                                     double vacuum_eps) {
  const Grid& gr = rho0.grid;
  const std::size_t n = gr.cells();

  VectorField lu = apply_lame(lame, u0, bc);
  ScalarField p = law.eval_p(rho0);
  VectorField gp = grad(p);
  VectorField stress = director_stress_direct(d0);

  CompatResidualReport rep{VectorField(gr), 0.0};
  for (int c = 0; c < gr.dim; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      const double numer = lu.comp[c][i] - gp.comp[c][i] - stress.comp[c][i];
      if (rho0.v[i] > vacuum_eps) {
        rep.g.comp[c][i] = numer / std::sqrt(rho0.v[i]);
      } else {
        rep.g.comp[c][i] = 0.0;
        rep.residual_sup_vacuum = std::max(rep.residual_sup_vacuum, std::abs(numer));
      }
    }
  }
  return rep;
}

std::vector<double> project_velocity(const VectorField& u,
                                     const EigenBasis& basis, int m) {
  if (m < 0 || m > static_cast<int>(basis.modes.size()))
    throw std::invalid_argument("projection order exceeds available basis modes");
  std::vector<double> coeffs(static_cast<std::size_t>(m));
  // modes are H1-orthonormal, so coefficients are plain H1 inner products
  for (int i = 0; i < m; ++i)
    coeffs[static_cast<std::size_t>(i)] =
        h1_inner(u, basis.modes[static_cast<std::size_t>(i)].phi);
  return coeffs;
}

VectorField reconstruct_velocity(const EigenBasis& basis,
                                 const std::vector<double>& coeffs) {
  if (basis.modes.empty()) throw std::invalid_argument("empty basis");
  if (coeffs.size() > basis.modes.size())
    throw std::invalid_argument("more coefficients than basis modes");
  VectorField out(basis.modes[0].phi.grid);
  for (std::size_t k = 0; k < coeffs.size(); ++k)
    add_scaled(out, coeffs[k], basis.modes[k].phi);
  return out;
}

}  // namespace nemflow
