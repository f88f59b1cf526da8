#include "nemflow/grid.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "nemflow/field.hpp"

namespace nemflow {

Grid Grid::make(int dim, std::array<int, 3> extents,
                std::array<double, 3> lengths, std::array<double, 3> origin,
                std::array<AxisBc, 3> bc) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("grid: dim must be 1, 2 or 3");
  Grid g;
  g.dim = dim;
  g.origin = origin;
  g.bc = bc;
  for (int a = 0; a < 3; ++a) {
    if (a < dim) {
      if (extents[a] < 4)
        throw std::invalid_argument("grid: extent along axis " + std::to_string(a) +
                                    " must be at least 4");
      if (!(lengths[a] > 0.0))
        throw std::invalid_argument("grid: length along axis " + std::to_string(a) +
                                    " must be positive");
      g.extents[a] = extents[a];
      g.spacing[a] = lengths[a] / extents[a];
    } else {
      g.extents[a] = 1;
      g.spacing[a] = 1.0;
      g.bc[a] = AxisBc::Periodic;
    }
  }
  return g;
}

void for_each_cell(const Grid& g,
                   const std::function<void(std::size_t, int, int, int)>& fn) {
  std::size_t idx = 0;
  for (int k = 0; k < g.extents[2]; ++k)
    for (int j = 0; j < g.extents[1]; ++j)
      for (int i = 0; i < g.extents[0]; ++i) fn(idx++, i, j, k);
}

ScalarField ScalarField::from_fn(
    const Grid& g, const std::function<double(double, double, double)>& f) {
  ScalarField out(g);
  for_each_cell(g, [&](std::size_t idx, int i, int j, int k) {
    out.v[idx] = f(g.cell_center(0, i), g.cell_center(1, j), g.cell_center(2, k));
  });
  return out;
}

VectorField VectorField::from_fn(
    const Grid& g,
    const std::function<std::array<double, 3>(double, double, double)>& f) {
  VectorField out(g);
  for_each_cell(g, [&](std::size_t idx, int i, int j, int k) {
    const auto val = f(g.cell_center(0, i), g.cell_center(1, j), g.cell_center(2, k));
    for (int c = 0; c < g.dim; ++c) out.comp[c][idx] = val[c];
  });
  return out;
}

DirectorField DirectorField::from_fn(
    const Grid& g,
    const std::function<std::array<double, 3>(double, double, double)>& f) {
  DirectorField out(g);
  for_each_cell(g, [&](std::size_t idx, int i, int j, int k) {
    const auto val = f(g.cell_center(0, i), g.cell_center(1, j), g.cell_center(2, k));
    for (int c = 0; c < 3; ++c) out.comp[c][idx] = val[c];
  });
  return out;
}

int SymTensorField::pack_index(int dim, int a, int b) {
  if (a > b) std::swap(a, b);
  if (a == b) return a;
  if (dim == 2) return 2;            // (01)
  return a == 0 ? (b == 1 ? 3 : 4) : 5;  // (01),(02),(12)
}

void add_scaled(ScalarField& y, double a, const ScalarField& x) {
  kernels::active().add_scaled(y.size(), a, x.data(), y.data());
}

void add_scaled(VectorField& y, double a, const VectorField& x) {
  for (int c = 0; c < y.components(); ++c)
    kernels::active().add_scaled(y.size(), a, x.data(c), y.data(c));
}

std::vector<double> flatten(const VectorField& u) {
  const std::size_t n = u.size();
  std::vector<double> flat(static_cast<std::size_t>(u.components()) * n);
  for (int c = 0; c < u.components(); ++c)
    std::copy(u.comp[c].begin(), u.comp[c].end(), flat.begin() + c * n);
  return flat;
}

void unflatten(const std::vector<double>& flat, VectorField& u) {
  const std::size_t n = u.size();
  for (int c = 0; c < u.components(); ++c)
    std::copy(flat.begin() + c * n, flat.begin() + (c + 1) * n,
              u.comp[c].begin());
}

}  // namespace nemflow
