#include "nemflow/linsolve.hpp"

#include <cmath>

#include "nemflow/kernels.hpp"

namespace nemflow {

using kernels::active;

namespace {

double nrm2(const std::vector<double>& v) {
  return std::sqrt(active().dot(v.size(), v.data(), v.data()));
}

}  // namespace

SolveStats cg(const LinOp& A, const std::vector<double>& b,
              std::vector<double>& x, double rel_tol, int max_iter,
              const std::vector<double>* jacobi) {
  const std::size_t n = b.size();
  x.assign(n, 0.0);
  SolveStats st;
  const double bnorm = nrm2(b);
  if (bnorm == 0.0) {
    st.converged = true;
    return st;
  }
  std::vector<double> r = b;  // x = 0
  std::vector<double> z(n), p(n), Ap(n);
  auto precond = [&](const std::vector<double>& in, std::vector<double>& out) {
    if (jacobi)
      active().mul(n, in.data(), jacobi->data(), out.data());
    else
      out = in;
  };
  precond(r, z);
  p = z;
  double rz = active().dot(n, r.data(), z.data());
  for (int it = 0; it < max_iter; ++it) {
    A(p, Ap);
    const double pAp = active().dot(n, p.data(), Ap.data());
    if (!(pAp > 0.0)) break;  // lost positivity; bail with current iterate
    const double alpha = rz / pAp;
    active().add_scaled(n, alpha, p.data(), x.data());
    active().add_scaled(n, -alpha, Ap.data(), r.data());
    st.iterations = it + 1;
    const double rnorm = nrm2(r);
    st.rel_residual = rnorm / bnorm;
    if (st.rel_residual <= rel_tol) {
      st.converged = true;
      return st;
    }
    precond(r, z);
    const double rz_new = active().dot(n, r.data(), z.data());
    const double beta = rz_new / rz;
    rz = rz_new;
    // p = z + beta p
    active().axpby(n, 1.0, z.data(), beta, p.data(), p.data());
  }
  st.rel_residual = nrm2(r) / bnorm;
  st.converged = st.rel_residual <= rel_tol;
  return st;
}

SolveStats bicgstab(const LinOp& A, const std::vector<double>& b,
                    std::vector<double>& x, double rel_tol, int max_iter) {
  const std::size_t n = b.size();
  x.assign(n, 0.0);
  SolveStats st;
  const double bnorm = nrm2(b);
  if (bnorm == 0.0) {
    st.converged = true;
    return st;
  }
  std::vector<double> r = b, r0 = b, p = b, v(n), s(n), t(n);
  double rho = active().dot(n, r0.data(), r.data());
  for (int it = 0; it < max_iter; ++it) {
    A(p, v);
    const double r0v = active().dot(n, r0.data(), v.data());
    if (r0v == 0.0) break;
    const double alpha = rho / r0v;
    s = r;
    active().add_scaled(n, -alpha, v.data(), s.data());
    if (nrm2(s) / bnorm <= rel_tol) {
      active().add_scaled(n, alpha, p.data(), x.data());
      st.iterations = it + 1;
      st.rel_residual = nrm2(s) / bnorm;
      st.converged = true;
      return st;
    }
    A(s, t);
    const double tt = active().dot(n, t.data(), t.data());
    if (tt == 0.0) break;
    const double omega = active().dot(n, t.data(), s.data()) / tt;
    active().add_scaled(n, alpha, p.data(), x.data());
    active().add_scaled(n, omega, s.data(), x.data());
    r = s;
    active().add_scaled(n, -omega, t.data(), r.data());
    st.iterations = it + 1;
    st.rel_residual = nrm2(r) / bnorm;
    if (st.rel_residual <= rel_tol) {
      st.converged = true;
      return st;
    }
    const double rho_new = active().dot(n, r0.data(), r.data());
    if (rho_new == 0.0 || omega == 0.0) break;
    const double beta = (rho_new / rho) * (alpha / omega);
    rho = rho_new;
    // p = r + beta (p - omega v)
    active().add_scaled(n, -omega, v.data(), p.data());
    active().axpby(n, 1.0, r.data(), beta, p.data(), p.data());
  }
  st.rel_residual = nrm2(r) / bnorm;
  st.converged = st.rel_residual <= rel_tol;
  return st;
}

}  // namespace nemflow
