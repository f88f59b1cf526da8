#pragma once
// Matrix-free Krylov solvers used by the implicit steps and the elliptic
// solves.  Operators act on flat coefficient vectors; fields are packed and
// unpacked at the call sites.

#include <functional>
#include <vector>

namespace nemflow {

struct SolveStats {
  int iterations = 0;
  double rel_residual = 0.0;
  bool converged = false;
};

using LinOp = std::function<void(const std::vector<double>&, std::vector<double>&)>;

// Conjugate gradients for symmetric positive (semi-)definite operators.
// jacobi, when given, holds the inverse diagonal.  Convergence is
// ||r|| <= rel_tol * ||b||; b = 0 returns x = 0 immediately.
SolveStats cg(const LinOp& A, const std::vector<double>& b,
              std::vector<double>& x, double rel_tol, int max_iter,
              const std::vector<double>* jacobi = nullptr);

// BiCGStab fallback for the wall-bounded solves, where one-sided closures
// perturb the operator off exact symmetry.
SolveStats bicgstab(const LinOp& A, const std::vector<double>& b,
                    std::vector<double>& x, double rel_tol, int max_iter);

}  // namespace nemflow
