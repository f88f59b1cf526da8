#include "nemflow/lame.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <tuple>

namespace nemflow {

using kernels::active;

std::optional<double> LameParams::c0() const {
  if (!blowup_margin_ok()) return std::nullopt;
  const double second = 4.0 * mu - 9.0 * (mu + lambda) / 4.0;
  return 5.0 * std::min(mu, second);
}

ViscosityReport check_viscosity(const LameParams& p) {
  ViscosityReport r;
  r.admissible = p.admissible();
  r.blowup_margin_ok = p.blowup_margin_ok();
  r.c0 = p.c0();
  return r;
}

VectorField apply_lame(const LameParams& p, const VectorField& u, VelocityBc bc) {
  const Grid& g = u.grid;
  VectorField out = laplacian(u, bc);
  for (int c = 0; c < out.components(); ++c)
    active().scale(out.size(), p.mu, out.data(c), out.data(c));
  // grad div u.  The a == b block is the same compact second difference the
  // Laplacian uses, so 1-d sine modes are exact discrete eigenvectors; the
  // cross blocks compose ghost-centered first differences whose reflection
  // parity follows the differentiated component.  With slip walls the two
  // closures are exact adjoints and -L stays symmetric.
  const double w = p.mu + p.lambda;
  for (int a = 0; a < g.dim; ++a) {
    const ScalarField diag =
        second_derivative({g, u.comp[a]}, a, velocity_wall_rule(bc, a, a));
    active().add_scaled(out.size(), w, diag.data(), out.data(a));
    for (int b = 0; b < g.dim; ++b) {
      if (b == a) continue;
      const ScalarField inner =
          derivative({g, u.comp[b]}, b, velocity_wall_rule(bc, b, b));
      const ScalarField cross = derivative(inner, a, velocity_wall_rule(bc, b, a));
      active().add_scaled(out.size(), w, cross.data(), out.data(a));
    }
  }
  return out;
}

SymTensorField deformation_tensor(const VectorField& u) {
  const int dim = u.grid.dim;
  SymTensorField t(u.grid);
  for (int a = 0; a < dim; ++a) {
    const ScalarField daa = derivative({u.grid, u.comp[a]}, a);
    std::copy(daa.v.begin(), daa.v.end(), t.comp[SymTensorField::pack_index(dim, a, a)].begin());
  }
  for (int a = 0; a < dim; ++a)
    for (int b = a + 1; b < dim; ++b) {
      const ScalarField dab = derivative({u.grid, u.comp[b]}, a);
      const ScalarField dba = derivative({u.grid, u.comp[a]}, b);
      auto& slot = t.comp[SymTensorField::pack_index(dim, a, b)];
      active().axpby(dab.size(), 0.5, dab.data(), 0.5, dba.data(), slot.data());
    }
  return t;
}

double sup_frobenius(const SymTensorField& t) {
  const int dim = t.grid.dim;
  const std::size_t n = t.grid.cells();
  std::vector<double> m2(n, 0.0), tmp(n);
  for (int a = 0; a < dim; ++a)
    for (int b = a; b < dim; ++b) {
      const auto& c = t.comp[SymTensorField::pack_index(dim, a, b)];
      active().mul(n, c.data(), c.data(), tmp.data());
      active().add_scaled(n, a == b ? 1.0 : 2.0, tmp.data(), m2.data());
    }
  return std::sqrt(active().max_val(n, m2.data()));
}

// ---------------------------------------------------------------------------
// eigenbasis
// ---------------------------------------------------------------------------

namespace {

constexpr double pi = std::numbers::pi;

bool fully_periodic(const Grid& g) {
  for (int a = 0; a < g.dim; ++a)
    if (!g.periodic(a)) return false;
  return true;
}

double h1_normalize(VectorField& phi) {
  const double nrm = std::sqrt(h1_inner(phi, phi));
  for (int c = 0; c < phi.components(); ++c)
    active().scale(phi.size(), 1.0 / nrm, phi.data(c), phi.data(c));
  return nrm;
}

int axis_mode_cap(const Grid& g, int axis) {
  // keep strictly below Nyquist: sampled sin/cos stay nonzero and exactly
  // orthogonal
  return (g.extents[axis] - 1) / 2;
}

struct FourierCandidate {
  double abs_sigma;
  std::array<int, 3> k;
  int polarization;  // 0 = longitudinal, 1.. = transverse
  int parity;        // 0 = sin, 1 = cos
};

// deterministic ordering: eigenvalue magnitude, then lattice point, then kind
bool candidate_less(const FourierCandidate& a, const FourierCandidate& b) {
  return std::tie(a.abs_sigma, a.k[0], a.k[1], a.k[2], a.polarization, a.parity) <
         std::tie(b.abs_sigma, b.k[0], b.k[1], b.k[2], b.polarization, b.parity);
}

// orthonormal frame with e0 along kappa
void polarization_frame(const std::array<double, 3>& kappa, int dim,
                        std::array<std::array<double, 3>, 3>& frame) {
  double norm = 0.0;
  for (int a = 0; a < dim; ++a) norm += kappa[a] * kappa[a];
  norm = std::sqrt(norm);
  for (int a = 0; a < 3; ++a) frame[0][a] = a < dim ? kappa[a] / norm : 0.0;
  if (dim == 1) return;
  if (dim == 2) {
    frame[1] = {-frame[0][1], frame[0][0], 0.0};
    return;
  }
  // dim == 3: pick the axis least aligned with kappa as the seed
  int seed = 0;
  for (int a = 1; a < 3; ++a)
    if (std::fabs(frame[0][a]) < std::fabs(frame[0][seed])) seed = a;
  std::array<double, 3> e{0.0, 0.0, 0.0};
  e[seed] = 1.0;
  double dot = 0.0;
  for (int a = 0; a < 3; ++a) dot += e[a] * frame[0][a];
  double n1 = 0.0;
  for (int a = 0; a < 3; ++a) {
    frame[1][a] = e[a] - dot * frame[0][a];
    n1 += frame[1][a] * frame[1][a];
  }
  n1 = std::sqrt(n1);
  for (int a = 0; a < 3; ++a) frame[1][a] /= n1;
  frame[2] = {frame[0][1] * frame[1][2] - frame[0][2] * frame[1][1],
              frame[0][2] * frame[1][0] - frame[0][0] * frame[1][2],
              frame[0][0] * frame[1][1] - frame[0][1] * frame[1][0]};
}

EigenBasis fourier_basis(const LameParams& p, const Grid& g, int m) {
  std::vector<FourierCandidate> cands;
  const int dim = g.dim;
  std::array<int, 3> cap{0, 0, 0};
  for (int a = 0; a < dim; ++a) cap[a] = axis_mode_cap(g, a);

  auto consider = [&](std::array<int, 3> k) {
    // half lattice: first nonzero entry positive, all-zero excluded
    int lead = -1;
    for (int a = dim - 1; a >= 0; --a)
      if (k[a] != 0) lead = a;
    if (lead < 0) return;
    if (k[lead] < 0) return;
    std::array<double, 3> kappa{0.0, 0.0, 0.0};
    double k2 = 0.0;
    for (int a = 0; a < dim; ++a) {
      kappa[a] = 2.0 * pi * k[a] / g.length(a);
      k2 += kappa[a] * kappa[a];
    }
    const int npol = dim;  // 1 longitudinal + (dim-1) transverse
    for (int pol = 0; pol < npol; ++pol) {
      const double sigma = pol == 0 ? (2.0 * p.mu + p.lambda) * k2 : p.mu * k2;
      for (int parity = 0; parity < 2; ++parity)
        cands.push_back({sigma, k, pol, parity});
    }
  };

  std::array<int, 3> k{0, 0, 0};
  for (k[0] = -cap[0]; k[0] <= cap[0]; ++k[0])
    for (k[1] = -cap[1]; k[1] <= cap[1]; ++k[1])
      for (k[2] = -cap[2]; k[2] <= cap[2]; ++k[2]) consider(k);

  std::sort(cands.begin(), cands.end(), candidate_less);
  if (m > static_cast<int>(cands.size()))
    throw std::invalid_argument("eigenbasis: requested more modes than the grid carries");

  EigenBasis basis;
  basis.grid = g;
  basis.bc = VelocityBc::PeriodicProxy;
  basis.params = p;
  basis.analytic = true;
  basis.modes.reserve(m);
  for (int idx = 0; idx < m; ++idx) {
    const auto& c = cands[idx];
    std::array<double, 3> kappa{0.0, 0.0, 0.0};
    for (int a = 0; a < dim; ++a) kappa[a] = 2.0 * pi * c.k[a] / g.length(a);
    std::array<std::array<double, 3>, 3> frame;
    polarization_frame(kappa, dim, frame);
    const auto& e = frame[c.polarization];
    VectorField phi = VectorField::from_fn(g, [&](double x, double y, double z) {
      const double phase = kappa[0] * x + kappa[1] * y + kappa[2] * z;
      const double w = c.parity == 0 ? std::sin(phase) : std::cos(phase);
      return std::array<double, 3>{w * e[0], w * e[1], w * e[2]};
    });
    h1_normalize(phi);
    basis.modes.push_back({-c.abs_sigma, std::move(phi)});
  }
  return basis;
}

EigenBasis dirichlet_1d_basis(const LameParams& p, const Grid& g, int m) {
  const double L = g.length(0);
  if (m > g.extents[0] - 1)
    throw std::invalid_argument("eigenbasis: requested more modes than the grid carries");
  EigenBasis basis;
  basis.grid = g;
  basis.bc = VelocityBc::Dirichlet;
  basis.params = p;
  basis.analytic = true;
  basis.modes.reserve(m);
  for (int k = 1; k <= m; ++k) {
    const double kap = k * pi / L;
    VectorField phi = VectorField::from_fn(g, [&](double x, double, double) {
      return std::array<double, 3>{std::sin(kap * (x - g.origin[0])), 0.0, 0.0};
    });
    h1_normalize(phi);
    basis.modes.push_back({-(2.0 * p.mu + p.lambda) * kap * kap, std::move(phi)});
  }
  return basis;
}

// Modified Gram-Schmidt in the H1 inner product, ascending |eigenvalue|.
void h1_orthonormalize(std::vector<EigenMode>& modes) {
  for (std::size_t i = 0; i < modes.size(); ++i) {
    VectorField& phi = modes[i].phi;
    for (std::size_t j = 0; j < i; ++j) {
      const double c = h1_inner(phi, modes[j].phi);
      add_scaled(phi, -c, modes[j].phi);
    }
    h1_normalize(phi);
  }
}

LinOp neg_lame_op(const LameParams& p, const Grid& g, VelocityBc bc) {
  return [p, g, bc](const std::vector<double>& in, std::vector<double>& out) {
    VectorField u(g);
    unflatten(in, u);
    const VectorField Lu = apply_lame(p, u, bc);
    out.resize(in.size());
    const std::size_t n = u.size();
    for (int c = 0; c < g.dim; ++c)
      active().scale(n, -1.0, Lu.data(c), out.data() + c * n);
  };
}

EigenBasis dense_numeric_basis(const LameParams& p, const Grid& g,
                               VelocityBc bc, int m) {
  const std::size_t cells = g.cells();
  const std::size_t n = cells * g.dim;
  Eigen::MatrixXd A(n, n);
  std::vector<double> e(n, 0.0), col(n);
  const auto op = neg_lame_op(p, g, bc);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    op(e, col);
    for (std::size_t i = 0; i < n; ++i) A(i, j) = col[i];
    e[j] = 0.0;
  }
  // one-sided wall closures leave a small asymmetry; eigensolve the symmetric
  // part
  const Eigen::MatrixXd S = 0.5 * (A + A.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigenbasis: dense eigensolve failed");

  EigenBasis basis;
  basis.grid = g;
  basis.bc = bc;
  basis.params = p;
  basis.analytic = false;
  // eigenvalues of -L ascending; we want |sigma| ascending, i.e. smallest
  // eigenvalues of -L first (they are >= 0 up to roundoff)
  for (int idx = 0; idx < m; ++idx) {
    VectorField phi(g);
    std::vector<double> flat(n);
    for (std::size_t i = 0; i < n; ++i) flat[i] = es.eigenvectors()(i, idx);
    unflatten(flat, phi);
    basis.modes.push_back({-es.eigenvalues()(idx), std::move(phi)});
  }
  h1_orthonormalize(basis.modes);
  return basis;
}

// Shift-invert Lanczos with full reorthogonalization for the smallest
// eigenpairs of -L when the dense path would be too large.
EigenBasis lanczos_numeric_basis(const LameParams& p, const Grid& g,
                                 VelocityBc bc, int m) {
  const std::size_t n = g.cells() * g.dim;
  const auto op = neg_lame_op(p, g, bc);
  const int steps = std::min<std::size_t>(n, static_cast<std::size_t>(2 * m + 20));
  std::vector<std::vector<double>> Q;
  std::vector<double> alpha, beta;
  std::vector<double> q(n), w(n), prev(n, 0.0);
  // deterministic start vector
  for (std::size_t i = 0; i < n; ++i) q[i] = std::sin(0.7 * (i + 1)) + 1e-3;
  double qn = std::sqrt(active().dot(n, q.data(), q.data()));
  for (auto& v : q) v /= qn;

  auto apply_inverse = [&](const std::vector<double>& in, std::vector<double>& out) {
    SolveStats st = bicgstab(op, in, out, 1e-12, 100000);
    if (!st.converged)
      throw std::runtime_error("eigenbasis: inner solve in Lanczos iteration failed");
  };

  double beta_prev = 0.0;
  for (int j = 0; j < steps; ++j) {
    Q.push_back(q);
    apply_inverse(q, w);
    const double a = active().dot(n, q.data(), w.data());
    alpha.push_back(a);
    active().add_scaled(n, -a, q.data(), w.data());
    if (j > 0) active().add_scaled(n, -beta_prev, prev.data(), w.data());
    // full reorthogonalization keeps the Ritz pairs clean
    for (const auto& qi : Q) {
      const double c = active().dot(n, qi.data(), w.data());
      active().add_scaled(n, -c, qi.data(), w.data());
    }
    const double b = std::sqrt(active().dot(n, w.data(), w.data()));
    if (b < 1e-14) break;
    beta.push_back(b);
    prev = q;
    for (std::size_t i = 0; i < n; ++i) q[i] = w[i] / b;
    beta_prev = b;
  }

  const int jdim = static_cast<int>(alpha.size());
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(jdim, jdim);
  for (int i = 0; i < jdim; ++i) {
    T(i, i) = alpha[i];
    if (i + 1 < jdim) T(i, i + 1) = T(i + 1, i) = beta[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  // largest theta of inv(-L) = smallest eigenvalue of -L
  EigenBasis basis;
  basis.grid = g;
  basis.bc = bc;
  basis.params = p;
  basis.analytic = false;
  for (int r = 0; r < m; ++r) {
    const int col = jdim - 1 - r;
    if (col < 0) throw std::runtime_error("eigenbasis: Lanczos space exhausted");
    const double theta = es.eigenvalues()(col);
    if (!(theta > 0.0))
      throw std::runtime_error("eigenbasis: Lanczos produced a nonpositive Ritz value");
    VectorField phi(g);
    std::vector<double> flat(n, 0.0);
    for (int j = 0; j < jdim; ++j)
      active().add_scaled(n, es.eigenvectors()(j, col), Q[j].data(), flat.data());
    unflatten(flat, phi);
    basis.modes.push_back({-1.0 / theta, std::move(phi)});
  }
  std::sort(basis.modes.begin(), basis.modes.end(),
            [](const EigenMode& a, const EigenMode& b) {
              return std::fabs(a.eigenvalue) < std::fabs(b.eigenvalue);
            });
  h1_orthonormalize(basis.modes);
  return basis;
}

constexpr std::size_t kDenseEigensolveLimit = 4096;

}  // namespace

int analytic_mode_budget(const Grid& g) {
  if (fully_periodic(g)) {
    long count = 0;
    std::array<int, 3> cap{0, 0, 0};
    for (int a = 0; a < g.dim; ++a) cap[a] = axis_mode_cap(g, a);
    std::array<int, 3> k{0, 0, 0};
    for (k[0] = -cap[0]; k[0] <= cap[0]; ++k[0])
      for (k[1] = -cap[1]; k[1] <= cap[1]; ++k[1])
        for (k[2] = -cap[2]; k[2] <= cap[2]; ++k[2]) {
          int lead = -1;
          for (int a = g.dim - 1; a >= 0; --a)
            if (k[a] != 0) lead = a;
          if (lead < 0 || k[lead] < 0) continue;
          count += 2 * g.dim;  // parities x polarizations
        }
    return static_cast<int>(count);
  }
  if (g.dim == 1) return g.extents[0] - 1;
  return 0;  // no closed-form family; numeric path
}

EigenBasis eigenbasis(const LameParams& p, const Grid& g, VelocityBc bc, int m) {
  if (!p.admissible())
    throw std::invalid_argument(
        "eigenbasis: inadmissible viscosity (require mu > 0, 2 mu + 3 lambda >= 0)");
  if (m < 1) throw std::invalid_argument("eigenbasis: m must be positive");
  if (fully_periodic(g) && bc == VelocityBc::PeriodicProxy)
    return fourier_basis(p, g, m);
  if (g.dim == 1 && bc == VelocityBc::Dirichlet) return dirichlet_1d_basis(p, g, m);
  const std::size_t n = g.cells() * g.dim;
  if (m > static_cast<int>(n))
    throw std::invalid_argument("eigenbasis: requested more modes than the grid carries");
  if (n <= kDenseEigensolveLimit) return dense_numeric_basis(p, g, bc, m);
  return lanczos_numeric_basis(p, g, bc, m);
}

// ---------------------------------------------------------------------------
// elliptic solves
// ---------------------------------------------------------------------------

VectorField solve_lame(const LameParams& p, const VectorField& f, VelocityBc bc,
                       SolveStats* stats, double rel_tol, int max_iter) {
  if (!p.admissible())
    throw std::invalid_argument(
        "solve_lame: inadmissible viscosity (require mu > 0, 2 mu + 3 lambda >= 0)");
  const Grid& g = f.grid;
  const bool periodic = fully_periodic(g);
  std::vector<double> b = flatten(f);
  const std::size_t n = f.size();

  if (periodic) {
    // solvability on the torus: componentwise zero mean
    double scale = active().max_abs(b.size(), b.data());
    if (scale == 0.0) scale = 1.0;
    for (int c = 0; c < g.dim; ++c) {
      const double mc = active().sum(n, b.data() + c * n) / static_cast<double>(n);
      if (std::fabs(mc) > 1e-10 * scale)
        throw std::invalid_argument(
            "solve_lame: right-hand side must have zero mean on a periodic grid");
      std::vector<double> ones(n, 1.0);
      active().add_scaled(n, -mc, ones.data(), b.data() + c * n);
    }
  }

  // solve (-L) u = -f
  active().scale(b.size(), -1.0, b.data(), b.data());
  const auto op = neg_lame_op(p, g, bc);

  std::vector<double> x;
  SolveStats st;
  if (periodic) {
    // Jacobi: interior diagonal of -L
    std::vector<double> jac(b.size());
    for (int c = 0; c < g.dim; ++c) {
      double diag = 0.0;
      for (int a = 0; a < g.dim; ++a)
        diag += 2.0 * p.mu / (g.spacing[a] * g.spacing[a]);
      diag += (p.mu + p.lambda) * 2.0 / (g.spacing[c] * g.spacing[c]);
      std::fill(jac.begin() + c * n, jac.begin() + (c + 1) * n, 1.0 / diag);
    }
    st = cg(op, b, x, rel_tol, max_iter, &jac);
  } else {
    st = bicgstab(op, b, x, rel_tol, max_iter);
  }
  if (stats) *stats = st;
  if (!st.converged)
    throw std::runtime_error("solve_lame: solver failed to reach tolerance");

  VectorField u(g);
  unflatten(x, u);
  if (periodic) subtract_mean(u);
  return u;
}

HelmholtzParts helmholtz_decompose(const VectorField& g, double rel_tol) {
  if (!fully_periodic(g.grid))
    throw std::invalid_argument("helmholtz_decompose: periodic grids only");
  const Grid& gr = g.grid;
  ScalarField rhs = divergence(g);
  subtract_mean(rhs);

  // solve -div(grad G) = -div g with the composed operator, so that
  // div(g - grad G) vanishes identically at the discrete level
  const std::size_t n = rhs.size();
  std::vector<double> b(rhs.v);
  active().scale(n, -1.0, b.data(), b.data());
  LinOp op = [&gr](const std::vector<double>& in, std::vector<double>& out) {
    ScalarField G{gr, in};
    const ScalarField dg = divergence(grad(G));
    out = dg.v;
    active().scale(out.size(), -1.0, out.data(), out.data());
  };
  std::vector<double> x;
  HelmholtzParts parts;
  parts.stats = cg(op, b, x, rel_tol, 100000);

  parts.potential = ScalarField{gr, x};
  subtract_mean(parts.potential);
  parts.gradient = grad(parts.potential);
  parts.solenoidal = g;
  for (int c = 0; c < g.components(); ++c)
    active().add_scaled(n, -1.0, parts.gradient.data(c), parts.solenoidal.data(c));
  return parts;
}

PressureDecomposition pressure_decompose(const LameParams& p,
                                         const PressureLaw& law,
                                         const ScalarField& rho, VelocityBc bc) {
  const ScalarField P = law.eval_p(rho);
  VectorField rhs = grad(P);
  PressureDecomposition out;
  out.v = solve_lame(p, rhs, bc, &out.stats);
  const ScalarField gv2 = grad_norm_sq(out.v);
  const double vol = rho.grid.cell_volume();
  out.grad_v_l2 = std::sqrt(vol * active().sum_abs_pow(gv2.size(), gv2.data(), 1.0));
  out.grad_v_l6 =
      std::pow(vol * active().sum_abs_pow(gv2.size(), gv2.data(), 3.0), 1.0 / 6.0);
  out.p_l2 = lp_norm(P, 2.0);
  out.p_l6 = lp_norm(P, 6.0);
  return out;
}

}  // namespace nemflow
