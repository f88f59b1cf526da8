#pragma once
// Uniform collocated grid on an axis-aligned box, cell-centered samples.
// Each axis is either fully periodic or walled on both faces; unbounded
// problems run on the periodic box as a proxy domain.

#include <array>
#include <cstddef>
#include <functional>

namespace nemflow {

enum class AxisBc { Periodic, Wall };

struct Grid {
  int dim = 1;
  std::array<int, 3> extents{1, 1, 1};      // inactive axes stay at 1
  std::array<double, 3> spacing{1.0, 1.0, 1.0};
  std::array<double, 3> origin{0.0, 0.0, 0.0};
  std::array<AxisBc, 3> bc{AxisBc::Periodic, AxisBc::Periodic, AxisBc::Periodic};

  // Validates dim in {1,2,3}, extents >= 4 and spacing > 0 on active axes.
  static Grid make(int dim, std::array<int, 3> extents,
                   std::array<double, 3> lengths, std::array<double, 3> origin,
                   std::array<AxisBc, 3> bc);

  std::size_t cells() const {
    std::size_t n = 1;
    for (int a = 0; a < dim; ++a) n *= static_cast<std::size_t>(extents[a]);
    return n;
  }
  // row-major, axis 0 fastest
  std::size_t stride(int axis) const {
    std::size_t s = 1;
    for (int a = 0; a < axis; ++a) s *= static_cast<std::size_t>(extents[a]);
    return s;
  }
  std::size_t index(int i, int j = 0, int k = 0) const {
    return (static_cast<std::size_t>(k) * extents[1] + j) * extents[0] + i;
  }
  double cell_center(int axis, int i) const {
    return origin[axis] + (i + 0.5) * spacing[axis];
  }
  double cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < dim; ++a) v *= spacing[a];
    return v;
  }
  double length(int axis) const { return extents[axis] * spacing[axis]; }
  double min_spacing() const {
    double h = spacing[0];
    for (int a = 1; a < dim; ++a) h = h < spacing[a] ? h : spacing[a];
    return h;
  }
  bool periodic(int axis) const { return bc[axis] == AxisBc::Periodic; }
  bool any_wall() const {
    for (int a = 0; a < dim; ++a)
      if (bc[a] == AxisBc::Wall) return true;
    return false;
  }

  bool operator==(const Grid&) const = default;
};

// Visits every cell as (flat_index, i, j, k).
void for_each_cell(const Grid& g,
                   const std::function<void(std::size_t, int, int, int)>& fn);

}  // namespace nemflow
