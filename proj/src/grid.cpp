#include "zyg/grid.hpp"

#include <algorithm>
#include <stdexcept>

namespace zyg {

namespace {

std::vector<Scalar> sorted_endpoints(std::span<const Box3> boxes, int axis) {
  std::vector<Scalar> bp;
  bp.reserve(2 * boxes.size());
  for (const Box3& b : boxes) {
    bp.push_back(b.axis(axis).lo);
    bp.push_back(b.axis(axis).hi);
  }
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  return bp;
}

// Index of value v in strictly increasing bp; v must be present.
std::size_t bp_index(const std::vector<Scalar>& bp, Scalar v) {
  auto it = std::lower_bound(bp.begin(), bp.end(), v);
  if (it == bp.end() || *it != v) {
    throw std::logic_error("grid: box endpoint is not a breakpoint");
  }
  return static_cast<std::size_t>(it - bp.begin());
}

} // namespace

const std::vector<Scalar>& Grid3::axis(int a) const {
  switch (a) {
    case 0: return xs;
    case 1: return ys;
    case 2: return zs;
    default: throw std::invalid_argument("Grid3::axis: axis must be 0, 1 or 2");
  }
}

Box3 Grid3::hull() const {
  return Box3(Interval(xs.front(), xs.back()), Interval(ys.front(), ys.back()),
              Interval(zs.front(), zs.back()));
}

Grid3 compress(std::span<const Box3> boxes) {
  if (boxes.empty()) {
    throw std::invalid_argument("compress: empty box sequence");
  }
  return Grid3{sorted_endpoints(boxes, 0), sorted_endpoints(boxes, 1), sorted_endpoints(boxes, 2)};
}

DepthField build_depth_field(std::span<const Box3> generators) {
  return build_depth_field(compress(generators), generators);
}

DepthField build_depth_field(Grid3 grid, std::span<const Box3> generators) {
  const std::size_t nx = grid.nx(), ny = grid.ny(), nz = grid.nz();
  // 3-D difference array: +1/-1 at the 8 corner octants of each box, then a
  // prefix sum per axis.
  std::vector<std::int32_t> diff((nx + 1) * (ny + 1) * (nz + 1), 0);
  auto dref = [&](std::size_t i, std::size_t j, std::size_t k) -> std::int32_t& {
    return diff[(k * (ny + 1) + j) * (nx + 1) + i];
  };
  for (const Box3& b : generators) {
    const std::size_t i0 = bp_index(grid.xs, b.x.lo), i1 = bp_index(grid.xs, b.x.hi);
    const std::size_t j0 = bp_index(grid.ys, b.y.lo), j1 = bp_index(grid.ys, b.y.hi);
    const std::size_t k0 = bp_index(grid.zs, b.z.lo), k1 = bp_index(grid.zs, b.z.hi);
    dref(i0, j0, k0) += 1;
    dref(i1, j0, k0) -= 1;
    dref(i0, j1, k0) -= 1;
    dref(i1, j1, k0) += 1;
    dref(i0, j0, k1) -= 1;
    dref(i1, j0, k1) += 1;
    dref(i0, j1, k1) += 1;
    dref(i1, j1, k1) -= 1;
  }
  for (std::size_t k = 0; k <= nz; ++k)
    for (std::size_t j = 0; j <= ny; ++j)
      for (std::size_t i = 1; i <= nx; ++i) dref(i, j, k) += dref(i - 1, j, k);
  for (std::size_t k = 0; k <= nz; ++k)
    for (std::size_t j = 1; j <= ny; ++j)
      for (std::size_t i = 0; i <= nx; ++i) dref(i, j, k) += dref(i, j - 1, k);
  for (std::size_t k = 1; k <= nz; ++k)
    for (std::size_t j = 0; j <= ny; ++j)
      for (std::size_t i = 0; i <= nx; ++i) dref(i, j, k) += dref(i, j, k - 1);

  DepthField field;
  field.grid = std::move(grid);
  field.depth.resize(nx * ny * nz);
  for (std::size_t k = 0; k < nz; ++k)
    for (std::size_t j = 0; j < ny; ++j)
      for (std::size_t i = 0; i < nx; ++i)
        field.depth[field.grid.cell_index(i, j, k)] = dref(i, j, k);
  return field;
}

} // namespace zyg
