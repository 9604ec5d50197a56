#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "nordvlas/errors.hpp"
#include "nordvlas/vec3.hpp"

namespace nordvlas {

/// Uniform cubic grid over [center - half_width, center + half_width]^3.
/// Nodes sit on cell corners, so there are cells_per_axis + 1 nodes per axis.
struct GridSpec {
  Vec3 center{};
  double half_width = 1.0;
  int cells_per_axis = 8;

  double dx() const { return 2.0 * half_width / cells_per_axis; }
  int nodes_per_axis() const { return cells_per_axis + 1; }
  std::size_t node_count() const {
    const auto n = static_cast<std::size_t>(nodes_per_axis());
    return n * n * n;
  }
  Vec3 lower() const { return center - Vec3{half_width, half_width, half_width}; }
  Vec3 node_position(int i, int j, int k) const {
    const double h = dx();
    const Vec3 lo = lower();
    return {lo.x + i * h, lo.y + j * h, lo.z + k * h};
  }

  /// Throws ConfigError unless cells_per_axis >= 8, even, and half_width > 0.
  void validate() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Node-centered values on a GridSpec, x-index slowest (row-major).
template <class T>
class Lattice {
 public:
  Lattice() = default;
  explicit Lattice(int nodes_per_axis, T value = T{})
      : n_(nodes_per_axis),
        data_(static_cast<std::size_t>(nodes_per_axis) * nodes_per_axis * nodes_per_axis, value) {}
  explicit Lattice(const GridSpec& grid, T value = T{}) : Lattice(grid.nodes_per_axis(), value) {}

  int nodes_per_axis() const { return n_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n_ + static_cast<std::size_t>(j)) * n_ +
           static_cast<std::size_t>(k);
  }

  T& operator()(int i, int j, int k) { return data_[index(i, j, k)]; }
  const T& operator()(int i, int j, int k) const { return data_[index(i, j, k)]; }
  T& operator[](std::size_t flat) { return data_[flat]; }
  const T& operator[](std::size_t flat) const { return data_[flat]; }

  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }

  void fill(T value) { std::fill(data_.begin(), data_.end(), value); }

  bool same_shape(const Lattice& other) const { return n_ == other.n_; }

  friend bool operator==(const Lattice&, const Lattice&) = default;

 private:
  int n_ = 0;
  std::vector<T> data_;
};

using ScalarLattice = Lattice<double>;
using VectorLattice = Lattice<Vec3>;

/// Position of a point relative to the lattice: lower-corner node of the
/// containing cell and fractional offsets in [0, 1).
struct CellLocation {
  int i = 0;
  int j = 0;
  int k = 0;
  double fx = 0.0;
  double fy = 0.0;
  double fz = 0.0;
};

inline CellLocation locate(const GridSpec& grid, const Vec3& x) {
  const double inv = 1.0 / grid.dx();
  const Vec3 lo = grid.lower();
  const double sx = (x.x - lo.x) * inv;
  const double sy = (x.y - lo.y) * inv;
  const double sz = (x.z - lo.z) * inv;
  CellLocation c;
  c.i = static_cast<int>(std::floor(sx));
  c.j = static_cast<int>(std::floor(sy));
  c.k = static_cast<int>(std::floor(sz));
  c.fx = sx - c.i;
  c.fy = sy - c.j;
  c.fz = sz - c.k;
  return c;
}

/// True when both corner nodes of the cell along every axis have a
/// well-defined central-difference gradient (at least one cell from the faces).
inline bool is_interior(const GridSpec& grid, const CellLocation& c) {
  const int hi = grid.cells_per_axis - 2;
  return c.i >= 1 && c.j >= 1 && c.k >= 1 && c.i <= hi && c.j <= hi && c.k <= hi;
}

/// Trilinear weights of the 8 corners, ordered (di, dj, dk) with dk fastest.
inline void trilinear_weights(const CellLocation& c, double (&w)[8]) {
  const double gx[2] = {1.0 - c.fx, c.fx};
  const double gy[2] = {1.0 - c.fy, c.fy};
  const double gz[2] = {1.0 - c.fz, c.fz};
  int m = 0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int d = 0; d < 2; ++d) w[m++] = gx[a] * gy[b] * gz[d];
}

template <class T>
T interpolate(const Lattice<T>& lattice, const CellLocation& c) {
  double w[8];
  trilinear_weights(c, w);
  T acc{};
  int m = 0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int d = 0; d < 2; ++d) acc += w[m++] * lattice(c.i + a, c.j + b, c.k + d);
  return acc;
}

}  // namespace nordvlas
