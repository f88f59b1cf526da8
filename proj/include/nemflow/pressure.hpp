#pragma once
// Barotropic pressure closure P(rho).  Admissible laws are locally Lipschitz
// on [0, inf) with P(0) = 0; the local Lipschitz bound over [0, R] feeds the
// continuation-time estimates, so it must be monotone in R.

#include <vector>

#include "nemflow/field.hpp"

namespace nemflow {

class PressureLaw {
 public:
  enum class Kind { Isentropic, Tabulated };

  // P = a rho^gamma, a > 0, gamma > 1
  static PressureLaw isentropic(double a, double gamma);
  // piecewise-linear graph through (rho_i, p_i); first node must be (0, 0);
  // extrapolates beyond the last node with the final slope
  static PressureLaw tabulated(std::vector<double> rho_nodes,
                               std::vector<double> p_nodes);

  Kind kind() const { return kind_; }
  double coeff_a() const { return a_; }
  double gamma() const { return gamma_; }
  const std::vector<double>& rho_nodes() const { return rho_nodes_; }
  const std::vector<double>& p_nodes() const { return p_nodes_; }

  double eval_p(double rho) const;
  // one-sided (right) derivative at kinks and at rho = 0
  double eval_dp(double rho) const;
  // sup of |P'| over [0, R]
  double lipschitz_bound(double R) const;

  ScalarField eval_p(const ScalarField& rho) const;

 private:
  PressureLaw() = default;
  Kind kind_ = Kind::Isentropic;
  double a_ = 1.0;
  double gamma_ = 1.4;
  std::vector<double> rho_nodes_, p_nodes_;
};

}  // namespace nemflow
