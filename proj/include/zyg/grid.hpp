#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "zyg/geometry.hpp"

namespace zyg {

/// Compressed grid: the sorted distinct endpoints of a box set per axis.
/// cell(i, j, k) = [xs_i, xs_{i+1}] x [ys_j, ys_{j+1}] x [zs_k, zs_{k+1}];
/// every generating box is an exact union of cells.
struct Grid3 {
  std::vector<Scalar> xs, ys, zs; // strictly increasing, at least 2 each

  std::size_t nx() const { return xs.size() - 1; }
  std::size_t ny() const { return ys.size() - 1; }
  std::size_t nz() const { return zs.size() - 1; }
  std::size_t cells() const { return nx() * ny() * nz(); }

  // x fastest, then y, then z
  std::size_t cell_index(std::size_t i, std::size_t j, std::size_t k) const {
    return (k * ny() + j) * nx() + i;
  }
  Measure cell_volume(std::size_t i, std::size_t j, std::size_t k) const {
    return (xs[i + 1] - xs[i]) * (ys[j + 1] - ys[j]) * (zs[k + 1] - zs[k]);
  }
  const std::vector<Scalar>& axis(int a) const;
  Box3 hull() const;

  bool operator==(const Grid3&) const = default;
};

/// Coordinate compression of a nonempty box sequence. At most 2n breakpoints
/// per axis for n boxes.
Grid3 compress(std::span<const Box3> boxes);

/// Piecewise-constant depth: per cell, the number of generating boxes whose
/// interior contains the cell's interior.
struct DepthField {
  Grid3 grid;
  std::vector<std::int32_t> depth; // indexed by Grid3::cell_index

  std::int32_t at(std::size_t i, std::size_t j, std::size_t k) const {
    return depth[grid.cell_index(i, j, k)];
  }
};

/// Materialized depth field on compress(generators).
DepthField build_depth_field(std::span<const Box3> generators);

/// Materialized depth field on a given grid; every generator endpoint must be
/// a grid breakpoint (callers compress the generators into the grid first).
DepthField build_depth_field(Grid3 grid, std::span<const Box3> generators);

} // namespace zyg
