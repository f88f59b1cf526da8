#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "nemflow/linsolve.hpp"

using namespace nemflow;

namespace {

// SPD: 2 + h^2 on the diagonal, -1 off-diagonal, periodic wrap
LinOp shifted_laplacian(std::size_t n, double shift) {
  return [n, shift](const std::vector<double>& x, std::vector<double>& y) {
    y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double xm = x[(i + n - 1) % n], xp = x[(i + 1) % n];
      y[i] = (2.0 + shift) * x[i] - xm - xp;
    }
  };
}

// nonsymmetric: adds a one-sided drift term
LinOp drift_operator(std::size_t n) {
  return [n](const std::vector<double>& x, std::vector<double>& y) {
    y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double xm = x[(i + n - 1) % n], xp = x[(i + 1) % n];
      y[i] = 3.0 * x[i] - xm - xp + 0.5 * (xp - x[i]);
    }
  };
}

double residual_norm(const LinOp& A, const std::vector<double>& b,
                     const std::vector<double>& x) {
  std::vector<double> ax;
  A(x, ax);
  double r2 = 0.0, b2 = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double r = b[i] - ax[i];
    r2 += r * r;
    b2 += b[i] * b[i];
  }
  return std::sqrt(r2) / std::sqrt(b2);
}

std::vector<double> random_rhs(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> b(n);
  for (auto& v : b) v = dist(rng);
  return b;
}

}  // namespace

TEST_SUITE("linear solvers") {

TEST_CASE("cg converges on an SPD operator") {
  const std::size_t n = 200;
  const LinOp A = shifted_laplacian(n, 0.01);
  const std::vector<double> b = random_rhs(n, 5);
  std::vector<double> x(n, 0.0);
  const SolveStats st = cg(A, b, x, 1e-12, 10000);
  CHECK(st.converged);
  CHECK(residual_norm(A, b, x) < 1e-11);
}

TEST_CASE("cg with a jacobi preconditioner still solves the system") {
  const std::size_t n = 200;
  const LinOp A = shifted_laplacian(n, 0.01);
  const std::vector<double> b = random_rhs(n, 6);
  const std::vector<double> jac(n, 1.0 / 2.01);
  std::vector<double> x(n, 0.0);
  const SolveStats st = cg(A, b, x, 1e-12, 10000, &jac);
  CHECK(st.converged);
  CHECK(residual_norm(A, b, x) < 1e-11);
}

TEST_CASE("cg short-circuits on a zero right-hand side") {
  const LinOp A = shifted_laplacian(16, 1.0);
  const std::vector<double> b(16, 0.0);
  std::vector<double> x(16, 7.0);
  const SolveStats st = cg(A, b, x, 1e-12, 100);
  CHECK(st.converged);
  CHECK(st.iterations == 0);
  for (double v : x) CHECK(v == 0.0);
}

TEST_CASE("cg reports failure when starved of iterations") {
  const std::size_t n = 400;
  const LinOp A = shifted_laplacian(n, 1e-6);  // ill conditioned
  const std::vector<double> b = random_rhs(n, 7);
  std::vector<double> x(n, 0.0);
  const SolveStats st = cg(A, b, x, 1e-14, 3);
  CHECK(!st.converged);
  CHECK(st.rel_residual > 1e-14);
}

TEST_CASE("bicgstab handles the nonsymmetric drift operator") {
  const std::size_t n = 150;
  const LinOp A = drift_operator(n);
  const std::vector<double> b = random_rhs(n, 8);
  std::vector<double> x(n, 0.0);
  const SolveStats st = bicgstab(A, b, x, 1e-12, 10000);
  CHECK(st.converged);
  CHECK(residual_norm(A, b, x) < 1e-10);
}

TEST_CASE("solutions match a dense elimination oracle") {
  // small enough to invert by Gauss elimination in the test itself
  const std::size_t n = 24;
  const LinOp A = shifted_laplacian(n, 0.5);
  std::vector<std::vector<double>> M(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    M[i][i] = 2.5;
    M[i][(i + 1) % n] = -1.0;
    M[i][(i + n - 1) % n] = -1.0;
  }
  std::vector<double> b = random_rhs(n, 9);
  std::vector<double> rhs = b;

  for (std::size_t col = 0; col < n; ++col) {  // partial pivoting
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(M[r][col]) > std::fabs(M[piv][col])) piv = r;
    std::swap(M[piv], M[col]);
    std::swap(rhs[piv], rhs[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = M[r][col] / M[col][col];
      for (std::size_t c = col; c < n; ++c) M[r][c] -= f * M[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<double> exact(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = rhs[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= M[i][c] * exact[c];
    exact[i] = s / M[i][i];
  }

  std::vector<double> x(n, 0.0);
  cg(A, b, x, 1e-13, 1000);
  for (std::size_t i = 0; i < n; ++i)
    CHECK(x[i] == doctest::Approx(exact[i]).epsilon(1e-10));
}

}  // TEST_SUITE
