#include "nemflow/ops.hpp"

#include <cmath>
#include <stdexcept>

namespace nemflow {

using kernels::active;

namespace {

// Memory layout along `axis`: idx = high*(n*s) + mid*s + low with s =
// stride(axis), n = extents[axis].  Every fixed (high, mid) pair is a
// contiguous block of length s, so all stencil work below is kernel calls on
// contiguous runs; only the coefficients change at the boundary slabs.

struct AxisView {
  std::size_t s;       // stride
  std::size_t n;       // extent along axis
  std::size_t outer;   // number of high slabs
};

AxisView axis_view(const Grid& g, int axis) {
  AxisView v;
  v.s = g.stride(axis);
  v.n = static_cast<std::size_t>(g.extents[axis]);
  v.outer = g.cells() / (v.s * v.n);
  return v;
}

void first_diff_axis(const double* f, const Grid& g, int axis, double* out) {
  const AxisView v = axis_view(g, axis);
  const double inv2h = 1.0 / (2.0 * g.spacing[axis]);
  const bool periodic = g.periodic(axis);
  const auto& k = active();
  for (std::size_t hi = 0; hi < v.outer; ++hi) {
    const std::size_t base = hi * v.n * v.s;
    // interior: mid in [1, n-2]
    k.stencil3(v.s * (v.n - 2), -inv2h, f + base, 0.0, f + base + v.s, inv2h,
               f + base + 2 * v.s, out + base + v.s);
    const std::size_t lo = base;                    // mid = 0
    const std::size_t hi_blk = base + (v.n - 1) * v.s;  // mid = n-1
    if (periodic) {
      k.stencil3(v.s, -inv2h, f + hi_blk, 0.0, f + lo, inv2h, f + lo + v.s,
                 out + lo);
      k.stencil3(v.s, -inv2h, f + hi_blk - v.s, 0.0, f + hi_blk, inv2h, f + lo,
                 out + hi_blk);
    } else {
      // one-sided second order at the wall faces
      k.stencil3(v.s, -3.0 * inv2h, f + lo, 4.0 * inv2h, f + lo + v.s, -inv2h,
                 f + lo + 2 * v.s, out + lo);
      k.stencil3(v.s, 3.0 * inv2h, f + hi_blk, -4.0 * inv2h, f + hi_blk - v.s,
                 inv2h, f + hi_blk - 2 * v.s, out + hi_blk);
    }
  }
}

void first_diff_axis_ghost(const double* f, const Grid& g, int axis,
                           WallRule rule, double* out) {
  const AxisView v = axis_view(g, axis);
  const double inv2h = 1.0 / (2.0 * g.spacing[axis]);
  const bool periodic = g.periodic(axis);
  const auto& k = active();
  for (std::size_t hi = 0; hi < v.outer; ++hi) {
    const std::size_t base = hi * v.n * v.s;
    k.stencil3(v.s * (v.n - 2), -inv2h, f + base, 0.0, f + base + v.s, inv2h,
               f + base + 2 * v.s, out + base + v.s);
    const std::size_t lo = base;
    const std::size_t hb = base + (v.n - 1) * v.s;
    if (periodic) {
      k.stencil3(v.s, -inv2h, f + hb, 0.0, f + lo, inv2h, f + lo + v.s,
                 out + lo);
      k.stencil3(v.s, -inv2h, f + hb - v.s, 0.0, f + hb, inv2h, f + lo,
                 out + hb);
    } else if (rule == WallRule::Odd) {
      // ghost = -first cell: (f1 + f0) / 2h and (-f_{n-1} - f_{n-2}) / 2h
      k.stencil3(v.s, inv2h, f + lo, inv2h, f + lo + v.s, 0.0, f + lo,
                 out + lo);
      k.stencil3(v.s, -inv2h, f + hb, -inv2h, f + hb - v.s, 0.0, f + hb,
                 out + hb);
    } else {
      // ghost = +first cell: (f1 - f0) / 2h and (f_{n-1} - f_{n-2}) / 2h
      k.stencil3(v.s, -inv2h, f + lo, inv2h, f + lo + v.s, 0.0, f + lo,
                 out + lo);
      k.stencil3(v.s, inv2h, f + hb, -inv2h, f + hb - v.s, 0.0, f + hb,
                 out + hb);
    }
  }
}

void second_diff_axis_acc(const double* f, const Grid& g, int axis,
                          WallRule rule, double* out) {
  const AxisView v = axis_view(g, axis);
  const double ih2 = 1.0 / (g.spacing[axis] * g.spacing[axis]);
  const bool periodic = g.periodic(axis);
  const auto& k = active();
  for (std::size_t hi = 0; hi < v.outer; ++hi) {
    const std::size_t base = hi * v.n * v.s;
    k.stencil3_acc(v.s * (v.n - 2), ih2, f + base, -2.0 * ih2, f + base + v.s,
                   ih2, f + base + 2 * v.s, out + base + v.s);
    const std::size_t lo = base;
    const std::size_t hb = base + (v.n - 1) * v.s;
    if (periodic) {
      k.stencil3_acc(v.s, ih2, f + hb, -2.0 * ih2, f + lo, ih2, f + lo + v.s,
                     out + lo);
      k.stencil3_acc(v.s, ih2, f + hb - v.s, -2.0 * ih2, f + hb, ih2, f + lo,
                     out + hb);
    } else if (rule == WallRule::Odd) {
      // ghost = -first cell: (f1 - 3 f0) / h^2
      k.stencil3_acc(v.s, -3.0 * ih2, f + lo, ih2, f + lo + v.s, 0.0, f + lo,
                     out + lo);
      k.stencil3_acc(v.s, -3.0 * ih2, f + hb, ih2, f + hb - v.s, 0.0, f + hb,
                     out + hb);
    } else {
      // ghost = +first cell: (f1 - f0) / h^2
      k.stencil3_acc(v.s, -ih2, f + lo, ih2, f + lo + v.s, 0.0, f + lo,
                     out + lo);
      k.stencil3_acc(v.s, -ih2, f + hb, ih2, f + hb - v.s, 0.0, f + hb,
                     out + hb);
    }
  }
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw std::invalid_argument("fields live on different grids");
}

}  // namespace

WallRule velocity_wall_rule(VelocityBc bc, int comp, int axis) {
  if (bc == VelocityBc::NavierSlip)
    return comp == axis ? WallRule::Odd : WallRule::Even;
  return WallRule::Odd;  // Dirichlet; PeriodicProxy has no wall cells
}

ScalarField derivative(const ScalarField& f, int axis) {
  if (axis < 0 || axis >= f.grid.dim)
    throw std::invalid_argument("derivative: axis out of range");
  ScalarField out(f.grid);
  first_diff_axis(f.data(), f.grid, axis, out.data());
  return out;
}

ScalarField derivative(const ScalarField& f, int axis, WallRule rule) {
  if (axis < 0 || axis >= f.grid.dim)
    throw std::invalid_argument("derivative: axis out of range");
  ScalarField out(f.grid);
  first_diff_axis_ghost(f.data(), f.grid, axis, rule, out.data());
  return out;
}

ScalarField second_derivative(const ScalarField& f, int axis, WallRule rule) {
  if (axis < 0 || axis >= f.grid.dim)
    throw std::invalid_argument("second_derivative: axis out of range");
  ScalarField out(f.grid);
  second_diff_axis_acc(f.data(), f.grid, axis, rule, out.data());
  return out;
}

VectorField grad(const ScalarField& f) {
  VectorField out(f.grid);
  for (int a = 0; a < f.grid.dim; ++a)
    first_diff_axis(f.data(), f.grid, a, out.data(a));
  return out;
}

ScalarField divergence(const VectorField& u) {
  ScalarField out(u.grid);
  ScalarField tmp(u.grid);
  for (int a = 0; a < u.grid.dim; ++a) {
    first_diff_axis(u.data(a), u.grid, a, tmp.data());
    active().add_scaled(out.size(), 1.0, tmp.data(), out.data());
  }
  return out;
}

ScalarField curl2(const VectorField& u) {
  if (u.grid.dim != 2)
    throw std::invalid_argument("curl2: requires a 2-d grid");
  ScalarField out(u.grid);
  ScalarField tmp(u.grid);
  first_diff_axis(u.data(1), u.grid, 0, out.data());
  first_diff_axis(u.data(0), u.grid, 1, tmp.data());
  active().add_scaled(out.size(), -1.0, tmp.data(), out.data());
  return out;
}

VectorField curl3(const VectorField& u) {
  if (u.grid.dim != 3)
    throw std::invalid_argument("curl3: requires a 3-d grid");
  VectorField out(u.grid);
  ScalarField a(u.grid), b(u.grid);
  const int perm[3][2] = {{1, 2}, {2, 0}, {0, 1}};
  for (int c = 0; c < 3; ++c) {
    const int i = perm[c][0], j = perm[c][1];
    first_diff_axis(u.data(j), u.grid, i, a.data());
    first_diff_axis(u.data(i), u.grid, j, b.data());
    active().axpby(out.size(), 1.0, a.data(), -1.0, b.data(), out.data(c));
  }
  return out;
}

void laplacian_into(const ScalarField& f, WallRule rule, ScalarField& out) {
  require_same_grid(f.grid, out.grid);
  active().fill(out.size(), 0.0, out.data());
  for (int a = 0; a < f.grid.dim; ++a)
    second_diff_axis_acc(f.data(), f.grid, a, rule, out.data());
}

ScalarField laplacian(const ScalarField& f, WallRule rule) {
  ScalarField out(f.grid);
  for (int a = 0; a < f.grid.dim; ++a)
    second_diff_axis_acc(f.data(), f.grid, a, rule, out.data());
  return out;
}

VectorField laplacian(const VectorField& u, VelocityBc bc) {
  VectorField out(u.grid);
  for (int c = 0; c < u.components(); ++c)
    for (int a = 0; a < u.grid.dim; ++a)
      second_diff_axis_acc(u.data(c), u.grid, a, velocity_wall_rule(bc, c, a),
                           out.data(c));
  return out;
}

DirectorField laplacian(const DirectorField& d) {
  DirectorField out(d.grid);
  for (int c = 0; c < 3; ++c)
    for (int a = 0; a < d.grid.dim; ++a)
      second_diff_axis_acc(d.data(c), d.grid, a, WallRule::Even, out.data(c));
  return out;
}

ScalarField convect(const VectorField& u, const ScalarField& f) {
  require_same_grid(u.grid, f.grid);
  ScalarField out(f.grid);
  ScalarField tmp(f.grid);
  for (int a = 0; a < f.grid.dim; ++a) {
    first_diff_axis(f.data(), f.grid, a, tmp.data());
    active().mul(tmp.size(), u.data(a), tmp.data(), tmp.data());
    active().add_scaled(out.size(), 1.0, tmp.data(), out.data());
  }
  return out;
}

double integrate(const ScalarField& f) {
  return f.grid.cell_volume() * active().sum(f.size(), f.data());
}

double mean(const ScalarField& f) {
  return active().sum(f.size(), f.data()) / static_cast<double>(f.size());
}

void subtract_mean(ScalarField& f) {
  const double m = mean(f);
  ScalarField ones(f.grid);
  active().fill(ones.size(), 1.0, ones.data());
  active().add_scaled(f.size(), -m, ones.data(), f.data());
}

void subtract_mean(VectorField& u) {
  for (int c = 0; c < u.components(); ++c) {
    const double m = active().sum(u.size(), u.data(c)) /
                     static_cast<double>(u.size());
    std::vector<double> ones(u.size(), 1.0);
    active().add_scaled(u.size(), -m, ones.data(), u.data(c));
  }
}

double lp_norm(const ScalarField& f, double p) {
  if (p < 1.0) throw std::invalid_argument("lp_norm: requires p >= 1");
  const double s = active().sum_abs_pow(f.size(), f.data(), p);
  return std::pow(f.grid.cell_volume() * s, 1.0 / p);
}

namespace {

// pointwise squared magnitude over ncomp component arrays
std::vector<double> magnitude_sq(const double* const* comp, int ncomp,
                                 std::size_t n) {
  std::vector<double> m2(n), tmp(n);
  active().mul(n, comp[0], comp[0], m2.data());
  for (int c = 1; c < ncomp; ++c) {
    active().mul(n, comp[c], comp[c], tmp.data());
    active().add_scaled(n, 1.0, tmp.data(), m2.data());
  }
  return m2;
}

double lp_of_magnitude(const Grid& g, const std::vector<double>& m2, double p) {
  const double s = active().sum_abs_pow(m2.size(), m2.data(), p / 2.0);
  return std::pow(g.cell_volume() * s, 1.0 / p);
}

}  // namespace

double lp_norm(const VectorField& u, double p) {
  if (p < 1.0) throw std::invalid_argument("lp_norm: requires p >= 1");
  const double* comp[3] = {u.data(0), nullptr, nullptr};
  for (int c = 1; c < u.components(); ++c) comp[c] = u.data(c);
  const auto m2 = magnitude_sq(comp, u.components(), u.size());
  return lp_of_magnitude(u.grid, m2, p);
}

double lp_norm(const DirectorField& d, double p) {
  if (p < 1.0) throw std::invalid_argument("lp_norm: requires p >= 1");
  const double* comp[3] = {d.data(0), d.data(1), d.data(2)};
  const auto m2 = magnitude_sq(comp, 3, d.size());
  return lp_of_magnitude(d.grid, m2, p);
}

double sup_abs(const ScalarField& f) {
  return active().max_abs(f.size(), f.data());
}

double sup_abs(const VectorField& u) {
  const double* comp[3] = {u.data(0), nullptr, nullptr};
  for (int c = 1; c < u.components(); ++c) comp[c] = u.data(c);
  const auto m2 = magnitude_sq(comp, u.components(), u.size());
  return std::sqrt(active().max_val(m2.size(), m2.data()));
}

ScalarField grad_norm_sq(const DirectorField& d) {
  ScalarField out(d.grid);
  ScalarField der(d.grid), sq(d.grid);
  for (int c = 0; c < 3; ++c)
    for (int a = 0; a < d.grid.dim; ++a) {
      first_diff_axis(d.data(c), d.grid, a, der.data());
      active().mul(der.size(), der.data(), der.data(), sq.data());
      active().add_scaled(out.size(), 1.0, sq.data(), out.data());
    }
  return out;
}

ScalarField grad_norm_sq(const VectorField& u) {
  ScalarField out(u.grid);
  ScalarField der(u.grid), sq(u.grid);
  for (int c = 0; c < u.components(); ++c)
    for (int a = 0; a < u.grid.dim; ++a) {
      first_diff_axis(u.data(c), u.grid, a, der.data());
      active().mul(der.size(), der.data(), der.data(), sq.data());
      active().add_scaled(out.size(), 1.0, sq.data(), out.data());
    }
  return out;
}

VectorField director_stress_direct(const DirectorField& d) {
  const Grid& g = d.grid;
  DirectorField ld(g);
  for (int c = 0; c < 3; ++c)
    for (int a = 0; a < g.dim; ++a)
      second_diff_axis_acc(d.data(c), g, a, WallRule::Even, ld.data(c));
  VectorField out(g);
  ScalarField der(g), term(g);
  for (int a = 0; a < g.dim; ++a)
    for (int c = 0; c < 3; ++c) {
      first_diff_axis(d.data(c), g, a, der.data());
      active().mul(der.size(), der.data(), ld.data(c), term.data());
      active().add_scaled(out.size(), 1.0, term.data(), out.data(a));
    }
  return out;
}

VectorField director_stress_divergence(const DirectorField& d) {
  const Grid& g = d.grid;
  const int dim = g.dim;
  const std::size_t n = g.cells();
  // grad d components
  std::vector<std::vector<ScalarField>> dd(dim);
  for (int a = 0; a < dim; ++a) {
    dd[a].reserve(3);
    for (int c = 0; c < 3; ++c) {
      ScalarField der(g);
      first_diff_axis(d.data(c), g, a, der.data());
      dd[a].push_back(std::move(der));
    }
  }
  ScalarField q(g);  // |grad d|^2
  {
    ScalarField sq(g);
    for (int a = 0; a < dim; ++a)
      for (int c = 0; c < 3; ++c) {
        active().mul(n, dd[a][c].data(), dd[a][c].data(), sq.data());
        active().add_scaled(n, 1.0, sq.data(), q.data());
      }
  }
  VectorField out(g);
  ScalarField T(g), der(g), prod(g);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) {
      // T_ab = sum_c d_a d_c * d_b d_c - delta_ab |grad d|^2 / 2
      active().fill(n, 0.0, T.data());
      for (int c = 0; c < 3; ++c) {
        active().mul(n, dd[a][c].data(), dd[b][c].data(), prod.data());
        active().add_scaled(n, 1.0, prod.data(), T.data());
      }
      if (a == b) active().add_scaled(n, -0.5, q.data(), T.data());
      first_diff_axis(T.data(), g, b, der.data());
      active().add_scaled(n, 1.0, der.data(), out.data(a));
    }
  return out;
}

double l2_inner(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid, b.grid);
  return a.grid.cell_volume() * active().dot(a.size(), a.data(), b.data());
}

double l2_inner(const VectorField& a, const VectorField& b) {
  require_same_grid(a.grid, b.grid);
  double s = 0.0;
  for (int c = 0; c < a.components(); ++c)
    s += active().dot(a.size(), a.data(c), b.data(c));
  return a.grid.cell_volume() * s;
}

double h1_inner(const VectorField& a, const VectorField& b) {
  require_same_grid(a.grid, b.grid);
  double s = l2_inner(a, b);
  ScalarField da(a.grid), db(a.grid);
  for (int c = 0; c < a.components(); ++c)
    for (int ax = 0; ax < a.grid.dim; ++ax) {
      first_diff_axis(a.data(c), a.grid, ax, da.data());
      first_diff_axis(b.data(c), b.grid, ax, db.data());
      s += a.grid.cell_volume() * active().dot(da.size(), da.data(), db.data());
    }
  return s;
}

}  // namespace nemflow
