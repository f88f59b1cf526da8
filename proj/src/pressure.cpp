#include "nemflow/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nemflow {

PressureLaw PressureLaw::isentropic(double a, double gamma) {
  if (!(a > 0.0)) throw std::invalid_argument("pressure: require a > 0");
  if (!(gamma > 1.0)) throw std::invalid_argument("pressure: require gamma > 1");
  PressureLaw law;
  law.kind_ = Kind::Isentropic;
  law.a_ = a;
  law.gamma_ = gamma;
  return law;
}

PressureLaw PressureLaw::tabulated(std::vector<double> rho_nodes,
                                   std::vector<double> p_nodes) {
  if (rho_nodes.size() != p_nodes.size() || rho_nodes.size() < 2)
    throw std::invalid_argument("pressure: table needs >= 2 matched nodes");
  if (rho_nodes.front() != 0.0 || p_nodes.front() != 0.0)
    throw std::invalid_argument("pressure: table must start at (0, 0)");
  for (std::size_t i = 1; i < rho_nodes.size(); ++i)
    if (!(rho_nodes[i] > rho_nodes[i - 1]))
      throw std::invalid_argument("pressure: table abscissae must increase");
  PressureLaw law;
  law.kind_ = Kind::Tabulated;
  law.rho_nodes_ = std::move(rho_nodes);
  law.p_nodes_ = std::move(p_nodes);
  return law;
}

double PressureLaw::eval_p(double rho) const {
  if (rho <= 0.0) return 0.0;
  if (kind_ == Kind::Isentropic) return a_ * std::pow(rho, gamma_);
  const auto& x = rho_nodes_;
  const auto& y = p_nodes_;
  const std::size_t last = x.size() - 1;
  if (rho >= x[last])
    return y[last] +
           (y[last] - y[last - 1]) / (x[last] - x[last - 1]) * (rho - x[last]);
  const auto it = std::upper_bound(x.begin(), x.end(), rho);
  const std::size_t i = static_cast<std::size_t>(it - x.begin());
  const double t = (rho - x[i - 1]) / (x[i] - x[i - 1]);
  return y[i - 1] + t * (y[i] - y[i - 1]);
}

double PressureLaw::eval_dp(double rho) const {
  if (rho < 0.0) rho = 0.0;
  if (kind_ == Kind::Isentropic) {
    if (rho == 0.0) return 0.0;  // gamma > 1
    return a_ * gamma_ * std::pow(rho, gamma_ - 1.0);
  }
  const auto& x = rho_nodes_;
  const auto& y = p_nodes_;
  const std::size_t last = x.size() - 1;
  if (rho >= x[last]) return (y[last] - y[last - 1]) / (x[last] - x[last - 1]);
  // right derivative: segment whose half-open interval [x_i, x_{i+1}) holds rho
  const auto it = std::upper_bound(x.begin(), x.end(), rho);
  const std::size_t i = static_cast<std::size_t>(it - x.begin());
  return (y[i] - y[i - 1]) / (x[i] - x[i - 1]);
}

double PressureLaw::lipschitz_bound(double R) const {
  if (R < 0.0) throw std::invalid_argument("pressure: Lipschitz radius R >= 0");
  if (kind_ == Kind::Isentropic) {
    // |P'| = a gamma rho^(gamma-1), increasing, sup at R
    return R == 0.0 ? 0.0 : a_ * gamma_ * std::pow(R, gamma_ - 1.0);
  }
  // max |slope| over segments meeting [0, R]; the final slope also covers the
  // extrapolated tail, and is picked up whenever R reaches it
  const auto& x = rho_nodes_;
  const auto& y = p_nodes_;
  double bound = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (x[i - 1] > R) break;
    bound = std::max(bound, std::fabs((y[i] - y[i - 1]) / (x[i] - x[i - 1])));
  }
  return bound;
}

ScalarField PressureLaw::eval_p(const ScalarField& rho) const {
  ScalarField out(rho.grid);
  for (std::size_t i = 0; i < rho.size(); ++i) out.v[i] = eval_p(rho.v[i]);
  return out;
}

}  // namespace nemflow
