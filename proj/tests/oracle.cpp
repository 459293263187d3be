#include "oracle.hpp"

#include <stdexcept>

namespace zyg::oracle {

namespace {

constexpr Measure kRasterBudget = 4'000'000; // unit cells

void check_budget(const Box3& window) {
  if (window.volume() > kRasterBudget) {
    throw std::invalid_argument("raster oracle: window too large");
  }
}

std::int32_t unit_cell_depth(std::span<const Box3> boxes, Scalar px, Scalar py, Scalar pz) {
  std::int32_t d = 0;
  for (const Box3& b : boxes) {
    if (b.x.lo <= px && px + 1 <= b.x.hi && b.y.lo <= py && py + 1 <= b.y.hi &&
        b.z.lo <= pz && pz + 1 <= b.z.hi) {
      ++d;
    }
  }
  return d;
}

} // namespace

std::map<std::int32_t, Measure> raster_depth_histogram(const Box3& region,
                                                       std::span<const Box3> generators) {
  check_budget(region);
  std::map<std::int32_t, Measure> hist;
  for (Scalar pz = region.z.lo; pz < region.z.hi; ++pz)
    for (Scalar py = region.y.lo; py < region.y.hi; ++py)
      for (Scalar px = region.x.lo; px < region.x.hi; ++px)
        hist[unit_cell_depth(generators, px, py, pz)] += 1;
  return hist;
}

Measure raster_union_measure(std::span<const Box3> boxes) {
  if (boxes.empty()) return 0;
  const Box3 hull = bounding_box(boxes);
  check_budget(hull);
  Measure covered = 0;
  for (Scalar pz = hull.z.lo; pz < hull.z.hi; ++pz)
    for (Scalar py = hull.y.lo; py < hull.y.hi; ++py)
      for (Scalar px = hull.x.lo; px < hull.x.hi; ++px)
        if (unit_cell_depth(boxes, px, py, pz) > 0) ++covered;
  return covered;
}

std::map<std::pair<std::int32_t, std::int32_t>, Measure>
raster_joint(const Box3& region, std::span<const Box3> class1, std::span<const Box3> class2) {
  check_budget(region);
  std::map<std::pair<std::int32_t, std::int32_t>, Measure> hist;
  for (Scalar pz = region.z.lo; pz < region.z.hi; ++pz)
    for (Scalar py = region.y.lo; py < region.y.hi; ++py)
      for (Scalar px = region.x.lo; px < region.x.hi; ++px)
        hist[{unit_cell_depth(class1, px, py, pz), unit_cell_depth(class2, px, py, pz)}] += 1;
  return hist;
}

MaximalField brute_maximal(const ScalarField3& f, int axis) {
  const int a = axis - 1;
  if (a < 0 || a > 2) throw std::invalid_argument("brute_maximal: bad axis");
  const Grid3& grid = f.grid;
  const std::vector<Scalar>& bp = grid.axis(a);
  const std::size_t g = bp.size() - 1;

  MaximalField mf;
  mf.grid = grid;
  mf.axis = axis;
  mf.value.resize(grid.cells());
  mf.is_exact = f.exact;
  if (f.exact) mf.exact.resize(grid.cells());

  for (std::size_t k = 0; k < grid.nz(); ++k) {
    for (std::size_t j = 0; j < grid.ny(); ++j) {
      for (std::size_t i = 0; i < grid.nx(); ++i) {
        const std::size_t pos = a == 0 ? i : (a == 1 ? j : k);
        auto cell_at = [&](std::size_t p) {
          return a == 0 ? grid.cell_index(p, j, k)
                        : (a == 1 ? grid.cell_index(i, p, k) : grid.cell_index(i, j, p));
        };
        Rational bestr{0, 1};
        double bestd = 0.0;
        bool first = true;
        for (std::size_t lo = 0; lo <= pos; ++lo) {
          for (std::size_t hi = pos + 1; hi <= g; ++hi) {
            if (f.exact) {
              Measure num = 0;
              for (std::size_t p = lo; p < hi; ++p) {
                num += f.ivalue[cell_at(p)] * (bp[p + 1] - bp[p]);
              }
              const Rational cand{num, bp[hi] - bp[lo]};
              if (first || bestr < cand) bestr = cand;
            } else {
              double num = 0.0;
              for (std::size_t p = lo; p < hi; ++p) {
                num += f.value[cell_at(p)] * static_cast<double>(bp[p + 1] - bp[p]);
              }
              const double cand = num / static_cast<double>(bp[hi] - bp[lo]);
              if (first || cand > bestd) bestd = cand;
            }
            first = false;
          }
        }
        const std::size_t cell = grid.cell_index(i, j, k);
        if (f.exact) {
          mf.exact[cell] = bestr;
          mf.value[cell] = bestr.to_double();
        } else {
          mf.value[cell] = bestd;
        }
      }
    }
  }
  return mf;
}

Measure brute_superlevel(const ScalarField3& f, int axis, double lambda) {
  return level_set_measure(brute_maximal(f, axis), lambda);
}

} // namespace zyg::oracle
