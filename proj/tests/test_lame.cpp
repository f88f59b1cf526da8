#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "nemflow/lame.hpp"

using namespace nemflow;

namespace {

constexpr double pi = std::numbers::pi;

Grid periodic1d(int n, double length = 2.0 * pi) {
  return Grid::make(1, {n, 1, 1}, {length, 1.0, 1.0}, {0.0, 0.0, 0.0},
                    {AxisBc::Periodic, AxisBc::Periodic, AxisBc::Periodic});
}

Grid wall1d(int n, double length = 1.0) {
  return Grid::make(1, {n, 1, 1}, {length, 1.0, 1.0}, {0.0, 0.0, 0.0},
                    {AxisBc::Wall, AxisBc::Periodic, AxisBc::Periodic});
}

// zero-mean band-limited periodic vector field
VectorField random_trig_vec(const Grid& g, std::uint64_t seed, int kmax = 3) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  VectorField u(g);
  for (int c = 0; c < g.dim; ++c) {
    std::vector<std::array<double, 4>> terms;
    for (int kx = 1; kx <= kmax; ++kx)
      for (int ky = 0; ky <= (g.dim > 1 ? kmax : 0); ++ky)
        terms.push_back({double(kx), double(ky), amp(rng) * pi, amp(rng)});
    const ScalarField f = ScalarField::from_fn(g, [&](double x, double y, double) {
      double s = 0.0;
      for (const auto& t : terms) s += t[3] * std::cos(t[0] * x + t[1] * y + t[2]);
      return s;
    });
    u.comp[c] = f.v;
  }
  subtract_mean(u);
  return u;
}

double rel_l2_diff(const VectorField& a, const VectorField& b) {
  double num = 0.0, den = 0.0;
  for (int c = 0; c < a.grid.dim; ++c)
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double d = a.comp[c][i] - b.comp[c][i];
      num += d * d;
      den += b.comp[c][i] * b.comp[c][i];
    }
  return std::sqrt(num) / std::sqrt(den);
}

}  // namespace

TEST_SUITE("elliptic operator") {

TEST_CASE("viscosity admissibility and the continuation margin") {
  ViscosityReport r = check_viscosity({1.0, 0.0});
  CHECK(r.admissible);
  CHECK(r.blowup_margin_ok);
  REQUIRE(r.c0.has_value());
  // 5 min(mu, 4 mu - 9 (mu + lambda) / 4) = 5 min(1, 1.75)
  CHECK(*r.c0 == doctest::Approx(5.0).epsilon(1e-15));

  r = check_viscosity({1.0, 1.0});  // admissible but no margin: 7 < 9
  CHECK(r.admissible);
  CHECK(!r.blowup_margin_ok);
  CHECK(!r.c0.has_value());

  r = check_viscosity({1.0, -0.9});  // 2 - 2.7 < 0
  CHECK(!r.admissible);

  r = check_viscosity({-1.0, 5.0});
  CHECK(!r.admissible);

  r = check_viscosity({1.0, -2.0 / 3.0});  // boundary case 2 mu + 3 lambda = 0
  CHECK(r.admissible);
  CHECK(r.blowup_margin_ok);
}

TEST_CASE("sine modes are exact discrete eigenvectors on the torus") {
  const Grid g = periodic1d(32);
  const LameParams p{1.3, 0.4};
  const double h = g.spacing[0];
  VectorField u(g);
  u.comp[0] = ScalarField::from_fn(
                  g, [](double x, double, double) { return std::sin(2.0 * x); })
                  .v;
  const VectorField lu = apply_lame(p, u, VelocityBc::PeriodicProxy);
  const double sigma =
      (2.0 * p.mu + p.lambda) * (2.0 - 2.0 * std::cos(2.0 * h)) / (h * h);
  for (std::size_t i = 0; i < u.size(); ++i)
    CHECK(lu.comp[0][i] == doctest::Approx(-sigma * u.comp[0][i]).epsilon(1e-11));
}

TEST_CASE("periodic analytic eigenvalues follow the dispersion relation") {
  const Grid g = periodic1d(64);
  const LameParams p{1.0, 0.5};
  const EigenBasis basis = eigenbasis(p, g, VelocityBc::PeriodicProxy, 8);
  REQUIRE(basis.count() == 8);
  CHECK(basis.analytic);
  // 1-d: longitudinal only, sin/cos pairs per wavenumber
  const double c = 2.0 * p.mu + p.lambda;
  for (int i = 0; i < 8; ++i) {
    const int k = i / 2 + 1;
    CHECK(basis.modes[i].eigenvalue ==
          doctest::Approx(-c * k * k).epsilon(1e-12));
  }
}

TEST_CASE("analytic modes are H1-orthonormal") {
  const Grid g = periodic1d(48);
  const EigenBasis basis = eigenbasis({1.0, 0.0}, g, VelocityBc::PeriodicProxy, 10);
  for (int i = 0; i < basis.count(); ++i)
    for (int j = 0; j <= i; ++j) {
      const double ip = h1_inner(basis.modes[i].phi, basis.modes[j].phi);
      CHECK(ip == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-10));
    }
}

TEST_CASE("dirichlet 1d modes satisfy the discrete operator exactly") {
  const Grid g = wall1d(24);
  const LameParams p{0.8, 0.1};
  const EigenBasis basis = eigenbasis(p, g, VelocityBc::Dirichlet, 4);
  CHECK(basis.analytic);
  const double h = g.spacing[0], L = g.length(0);
  for (int m = 0; m < basis.count(); ++m) {
    const VectorField& phi = basis.modes[m].phi;
    const VectorField lphi = apply_lame(p, phi, VelocityBc::Dirichlet);
    const double kap = (m + 1) * pi / L;
    const double sigma =
        (2.0 * p.mu + p.lambda) * (2.0 - 2.0 * std::cos(kap * h)) / (h * h);
    double sup = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) {
      sup = std::fmax(sup, std::fabs(lphi.comp[0][i] + sigma * phi.comp[0][i]));
      scale = std::fmax(scale, std::fabs(sigma * phi.comp[0][i]));
    }
    CHECK(sup <= 1e-10 * scale);
    // stored eigenvalue is the continuum limit of sigma
    CHECK(basis.modes[m].eigenvalue ==
          doctest::Approx(-(2.0 * p.mu + p.lambda) * kap * kap).epsilon(2e-2));
  }
}

TEST_CASE("numeric wall basis is dissipative and H1-orthonormal") {
  const Grid g = Grid::make(2, {8, 8, 1}, {1.0, 1.0, 1.0}, {0.0, 0.0, 0.0},
                            {AxisBc::Wall, AxisBc::Wall, AxisBc::Periodic});
  const EigenBasis basis = eigenbasis({1.0, 0.0}, g, VelocityBc::NavierSlip, 5);
  CHECK(!basis.analytic);
  REQUIRE(basis.count() == 5);
  double prev = 0.0;
  for (int i = 0; i < 5; ++i) {
    CHECK(basis.modes[i].eigenvalue <= 1e-9);  // -L is positive semidefinite
    CHECK(std::fabs(basis.modes[i].eigenvalue) >= prev - 1e-9);
    prev = std::fabs(basis.modes[i].eigenvalue);
    for (int j = 0; j <= i; ++j)
      CHECK(h1_inner(basis.modes[i].phi, basis.modes[j].phi) ==
            doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-9));
  }
}

TEST_CASE("requesting more modes than the grid carries is an error") {
  const Grid g = periodic1d(8);
  CHECK_THROWS(eigenbasis({1.0, 0.0}, g, VelocityBc::PeriodicProxy, 1000));
}

TEST_CASE("solve then apply recovers a random smooth forcing") {
  const Grid g = periodic1d(64);
  const LameParams p{1.0, 0.3};
  const VectorField f = random_trig_vec(g, 17);
  SolveStats st;
  const VectorField u = solve_lame(p, f, VelocityBc::PeriodicProxy, &st);
  CHECK(st.converged);
  const VectorField lu = apply_lame(p, u, VelocityBc::PeriodicProxy);
  CHECK(rel_l2_diff(lu, f) < 1e-7);
}

TEST_CASE("wall-bounded solve round trip") {
  const Grid g = wall1d(32);
  const LameParams p{1.0, 0.0};
  VectorField f(g);
  f.comp[0] = ScalarField::from_fn(g, [](double x, double, double) {
                return std::sin(3.0 * pi * x) + 0.4 * std::sin(pi * x);
              }).v;
  SolveStats st;
  const VectorField u = solve_lame(p, f, VelocityBc::Dirichlet, &st);
  CHECK(st.converged);
  const VectorField lu = apply_lame(p, u, VelocityBc::Dirichlet);
  CHECK(rel_l2_diff(lu, f) < 1e-7);
}

TEST_CASE("helmholtz parts are discretely orthogonal with small divergence") {
  const Grid g = Grid::make(2, {24, 24, 1}, {2.0 * pi, 2.0 * pi, 1.0},
                            {0.0, 0.0, 0.0},
                            {AxisBc::Periodic, AxisBc::Periodic, AxisBc::Periodic});
  for (std::uint64_t trial = 0; trial < 5; ++trial) {
    const VectorField gfield = random_trig_vec(g, 100 + trial);
    const HelmholtzParts parts = helmholtz_decompose(gfield);
    const double g2 = l2_inner(gfield, gfield);
    CHECK(std::fabs(l2_inner(parts.gradient, parts.solenoidal)) <= 1e-10 * g2);
    const ScalarField dh = divergence(parts.solenoidal);
    CHECK(std::sqrt(l2_inner(dh, dh)) <= 1e-6 * std::sqrt(g2));
    // the parts recompose the input
    for (int c = 0; c < g.dim; ++c)
      for (std::size_t i = 0; i < gfield.size(); ++i)
        CHECK(parts.gradient.comp[c][i] + parts.solenoidal.comp[c][i] ==
              doctest::Approx(gfield.comp[c][i]).epsilon(1e-9));
  }
}

TEST_CASE("pressure decomposition inverts the operator on grad P") {
  const Grid g = periodic1d(48);
  const LameParams p{1.0, 0.2};
  const PressureLaw law = PressureLaw::isentropic(1.0, 1.4);
  const ScalarField rho = ScalarField::from_fn(
      g, [](double x, double, double) { return 1.0 + 0.3 * std::sin(x); });
  const PressureDecomposition dec = pressure_decompose(p, law, rho, VelocityBc::PeriodicProxy);
  CHECK(dec.stats.converged);
  const VectorField lv = apply_lame(p, dec.v, VelocityBc::PeriodicProxy);
  const VectorField gp = grad(law.eval_p(rho));
  CHECK(rel_l2_diff(lv, gp) < 1e-6);
  CHECK(dec.grad_v_l2 > 0.0);
  CHECK(dec.p_l2 == doctest::Approx(lp_norm(law.eval_p(rho), 2.0)).epsilon(1e-12));
}

TEST_CASE("deformation tensor of a linear shear") {
  const Grid g = Grid::make(2, {16, 16, 1}, {1.0, 1.0, 1.0}, {0.0, 0.0, 0.0},
                            {AxisBc::Wall, AxisBc::Wall, AxisBc::Periodic});
  VectorField u(g);
  u.comp[0] = ScalarField::from_fn(g, [](double, double y, double) { return 2.0 * y; }).v;
  // D = [[0, 1], [1, 0]]: Frobenius norm sqrt(2)
  const SymTensorField D = deformation_tensor(u);
  CHECK(sup_frobenius(D) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
  const int p01 = SymTensorField::pack_index(2, 0, 1);
  CHECK(D.comp[static_cast<std::size_t>(p01)][g.index(8, 8)] ==
        doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("projection coefficients come back from reconstruction") {
  const Grid g = periodic1d(32);
  const EigenBasis basis = eigenbasis({1.0, 0.0}, g, VelocityBc::PeriodicProxy, 6);
  VectorField u(g);
  const double c[6] = {0.4, -0.2, 0.1, 0.05, -0.3, 0.15};
  for (int i = 0; i < 6; ++i) add_scaled(u, c[i], basis.modes[i].phi);
  // h1_inner against each mode must return the coefficients
  for (int i = 0; i < 6; ++i)
    CHECK(h1_inner(u, basis.modes[i].phi) == doctest::Approx(c[i]).epsilon(1e-10));
}

}  // TEST_SUITE
