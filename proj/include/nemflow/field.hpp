#pragma once
// Field containers over a Grid.  Plain value types: copying a field snapshots
// it.  Storage is structure-of-arrays so the kernels see long contiguous
// runs.  The director always carries three components regardless of grid
// dimension; velocity carries grid.dim components.

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include "nemflow/grid.hpp"
#include "nemflow/kernels.hpp"

namespace nemflow {

struct ScalarField {
  Grid grid;
  std::vector<double> v;

  ScalarField() = default;
  explicit ScalarField(const Grid& g) : grid(g), v(g.cells(), 0.0) {}
  ScalarField(const Grid& g, std::vector<double> data)
      : grid(g), v(std::move(data)) {}

  double* data() { return v.data(); }
  const double* data() const { return v.data(); }
  std::size_t size() const { return v.size(); }
  double& operator[](std::size_t i) { return v[i]; }
  double operator[](std::size_t i) const { return v[i]; }

  static ScalarField from_fn(const Grid& g,
                             const std::function<double(double, double, double)>& f);
};

struct VectorField {
  Grid grid;
  std::array<std::vector<double>, 3> comp;  // comp[c] empty for c >= grid.dim

  VectorField() = default;
  explicit VectorField(const Grid& g) : grid(g) {
    for (int c = 0; c < g.dim; ++c) comp[c].assign(g.cells(), 0.0);
  }

  int components() const { return grid.dim; }
  double* data(int c) { return comp[c].data(); }
  const double* data(int c) const { return comp[c].data(); }
  std::size_t size() const { return comp[0].size(); }

  static VectorField from_fn(
      const Grid& g,
      const std::function<std::array<double, 3>(double, double, double)>& f);
};

struct DirectorField {
  Grid grid;
  std::array<std::vector<double>, 3> comp;  // always three components

  DirectorField() = default;
  explicit DirectorField(const Grid& g) : grid(g) {
    for (auto& c : comp) c.assign(g.cells(), 0.0);
  }

  double* data(int c) { return comp[c].data(); }
  const double* data(int c) const { return comp[c].data(); }
  std::size_t size() const { return comp[0].size(); }

  static DirectorField from_fn(
      const Grid& g,
      const std::function<std::array<double, 3>(double, double, double)>& f);
};

// Symmetric rank-2 tensor field, packed upper triangle: in 3D the order is
// (00,11,22,01,02,12); lower dimensions use the leading dim*(dim+1)/2 slots.
struct SymTensorField {
  Grid grid;
  std::vector<std::vector<double>> comp;

  SymTensorField() = default;
  explicit SymTensorField(const Grid& g)
      : grid(g), comp(static_cast<std::size_t>(g.dim * (g.dim + 1) / 2),
                      std::vector<double>(g.cells(), 0.0)) {}

  static int pack_index(int dim, int a, int b);
  double* data(int p) { return comp[p].data(); }
  const double* data(int p) const { return comp[p].data(); }
};

// in-place y += a*x over matching grids
void add_scaled(ScalarField& y, double a, const ScalarField& x);
void add_scaled(VectorField& y, double a, const VectorField& x);

// component-major packing for the flat linear-algebra paths
std::vector<double> flatten(const VectorField& u);
void unflatten(const std::vector<double>& flat, VectorField& u);

}  // namespace nemflow
