#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "nemflow/initial_data.hpp"
#include "nemflow/ops.hpp"

using namespace nemflow;

namespace {

constexpr double pi = std::numbers::pi;

Grid periodic1d(int n) {
  return Grid::make(1, {n, 1, 1}, {2.0 * pi, 1.0, 1.0}, {0.0, 0.0, 0.0},
                    {AxisBc::Periodic, AxisBc::Periodic, AxisBc::Periodic});
}

DirectorField tilted_director(const Grid& g, double amp) {
  return DirectorField::from_fn(g, [amp](double x, double, double) {
    const double th = amp * std::sin(x);
    return std::array<double, 3>{std::cos(th), std::sin(th), 0.0};
  });
}

VectorField zero_mean_trig(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  VectorField u(g);
  const double a1 = amp(rng), a2 = amp(rng), ph = amp(rng);
  u.comp[0] = ScalarField::from_fn(g, [&](double x, double, double) {
                return a1 * std::sin(x + ph) + a2 * std::cos(2.0 * x);
              }).v;
  return u;
}

}  // namespace

TEST_SUITE("initial data") {

TEST_CASE("density lift adds exactly delta everywhere") {
  const Grid g = periodic1d(32);
  const ScalarField rho = ScalarField::from_fn(
      g, [](double x, double, double) { return 1.0 + std::sin(x); });
  const double delta = 1e-3;
  const ScalarField lifted = regularize_density(rho, delta);
  for (std::size_t i = 0; i < rho.size(); ++i)
    CHECK(lifted[i] == rho[i] + delta);
  // mass shifts by delta |Omega|
  CHECK(integrate(lifted) - integrate(rho) ==
        doctest::Approx(delta * 2.0 * pi).epsilon(1e-12));
}

TEST_CASE("negative densities and negative lifts are rejected") {
  const Grid g = periodic1d(8);
  ScalarField rho(g);
  CHECK_NOTHROW(regularize_density(rho, 0.0));  // vacuum is admissible
  rho[3] = -1e-8;
  CHECK_THROWS(regularize_density(rho, 1e-3));
  rho[3] = 0.0;
  CHECK_THROWS(regularize_density(rho, -1e-3));
  rho[2] = std::nan("");
  CHECK_THROWS(regularize_density(rho, 0.0));
}

TEST_CASE("director projection reports the drift it removed") {
  const Grid g = periodic1d(16);
  DirectorField d(g);
  for (std::size_t i = 0; i < d.size(); ++i) {
    d.comp[0][i] = 3.0;
    d.comp[1][i] = 4.0;
  }
  double defect = -1.0;
  const DirectorField nd = normalize_director(d, &defect);
  CHECK(defect == doctest::Approx(4.0).epsilon(1e-14));
  for (std::size_t i = 0; i < nd.size(); ++i) {
    const double m = std::sqrt(nd.comp[0][i] * nd.comp[0][i] +
                               nd.comp[1][i] * nd.comp[1][i] +
                               nd.comp[2][i] * nd.comp[2][i]);
    CHECK(std::fabs(m - 1.0) <= 1e-15);
  }
}

TEST_CASE("near-zero director vectors cannot be projected") {
  const Grid g = periodic1d(8);
  DirectorField d(g);
  for (std::size_t i = 0; i < d.size(); ++i) d.comp[2][i] = 1.0;
  d.comp[2][5] = 1e-12;  // magnitude collapses at one cell
  CHECK_THROWS(normalize_director(d));
}

TEST_CASE("compatibility solve round trip recovers the datum") {
  const Grid g = periodic1d(64);
  const LameParams lame{1.0, 0.3};
  const PressureLaw law = PressureLaw::isentropic(1.0, 1.4);
  const ScalarField rho = ScalarField::from_fn(
      g, [](double x, double, double) { return 1.0 + 0.4 * std::sin(x); });
  const DirectorField d = tilted_director(g, 0.3);
  // sqrt(rho) g must be mean-free for the torus to balance it; build g
  // backwards from a mean-free weighted datum
  VectorField gdat = zero_mean_trig(g, 3);
  for (std::size_t i = 0; i < gdat.size(); ++i)
    gdat.comp[0][i] /= std::sqrt(rho[i]);

  const CompatVelocity cv =
      solve_compatibility(rho, d, gdat, lame, law, VelocityBc::PeriodicProxy);
  CHECK(cv.stats.converged);

  const CompatResidualReport rep =
      compat_residual(rho, cv.u0, d, lame, law, VelocityBc::PeriodicProxy);
  // the recovered datum differs from the input by the mean that the torus
  // cannot carry; compare after removing it
  VectorField got = rep.g;
  VectorField want = gdat;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    // weight by sqrt(rho): the projection acted on sqrt(rho) g
    const double w = std::sqrt(rho[i]);
    num += w * (got.comp[0][i] - want.comp[0][i]);
    den += 1.0;
  }
  const double shift = num / den;
  double err2 = 0.0, ref2 = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    const double w = std::sqrt(rho[i]);
    const double e = w * got.comp[0][i] - (w * want.comp[0][i] + shift);
    err2 += e * e;
    ref2 += w * want.comp[0][i] * w * want.comp[0][i];
  }
  CHECK(std::sqrt(err2 / ref2) < 1e-7);
}

TEST_CASE("a net force on the torus is rejected") {
  const Grid g = periodic1d(32);
  const LameParams lame{1.0, 0.0};
  const PressureLaw law = PressureLaw::isentropic(1.0, 1.4);
  ScalarField rho(g);
  kernels::active().fill(rho.size(), 1.0, rho.data());
  DirectorField d(g);
  for (std::size_t i = 0; i < d.size(); ++i) d.comp[2][i] = 1.0;
  VectorField gdat(g);
  kernels::active().fill(gdat.size(), 0.7, gdat.comp[0].data());  // constant push
  CHECK_THROWS_WITH_AS(
      solve_compatibility(rho, d, gdat, lame, law, VelocityBc::PeriodicProxy),
      "compatibility datum carries a net force the periodic proxy cannot balance",
      std::invalid_argument);
}

TEST_CASE("spectral projection is a contraction in H1") {
  const Grid g = periodic1d(48);
  const EigenBasis basis = eigenbasis({1.0, 0.0}, g, VelocityBc::PeriodicProxy, 8);
  const VectorField u = zero_mean_trig(g, 11);
  const std::vector<double> c = project_velocity(u, basis, 8);
  const VectorField pu = reconstruct_velocity(basis, c);
  CHECK(std::sqrt(h1_inner(pu, pu)) <= std::sqrt(h1_inner(u, u)) * (1.0 + 1e-12));
  // projecting the projection changes nothing
  const std::vector<double> c2 = project_velocity(pu, basis, 8);
  for (std::size_t i = 0; i < c.size(); ++i)
    CHECK(c2[i] == doctest::Approx(c[i]).epsilon(1e-11));
}

TEST_CASE("projection order cannot exceed the basis") {
  const Grid g = periodic1d(16);
  const EigenBasis basis = eigenbasis({1.0, 0.0}, g, VelocityBc::PeriodicProxy, 4);
  const VectorField u(g);
  CHECK_THROWS(project_velocity(u, basis, 5));
}

}  // TEST_SUITE
