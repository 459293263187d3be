#include "zyg/measure.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace zyg {

namespace {

// Shared machinery for the z-slab sweeps: boxes are clipped to a window,
// breakpoints collected per axis, and each z-slab is processed with 2-D
// difference arrays over (x, y). Cell volumes accumulate exactly in int64;
// the load-time hull bound keeps every sum well inside the range.

struct ClippedSet {
  std::vector<Box3> boxes;

  void add_clipped(std::span<const Box3> src, const Box3& window) {
    for (const Box3& b : src) {
      if (auto c = intersect(b, window)) boxes.push_back(*c);
    }
  }
};

struct SlabGrid {
  std::vector<Scalar> xs, ys, zs;

  void collect(std::span<const Box3> boxes) {
    for (const Box3& b : boxes) {
      xs.push_back(b.x.lo);
      xs.push_back(b.x.hi);
      ys.push_back(b.y.lo);
      ys.push_back(b.y.hi);
      zs.push_back(b.z.lo);
      zs.push_back(b.z.hi);
    }
  }
  void finish() {
    auto dedup = [](std::vector<Scalar>& v) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    dedup(xs);
    dedup(ys);
    dedup(zs);
  }
  std::size_t nx() const { return xs.empty() ? 0 : xs.size() - 1; }
  std::size_t ny() const { return ys.empty() ? 0 : ys.size() - 1; }
  std::size_t nz() const { return zs.empty() ? 0 : zs.size() - 1; }
};

std::size_t bp_index(const std::vector<Scalar>& bp, Scalar v) {
  return static_cast<std::size_t>(std::lower_bound(bp.begin(), bp.end(), v) - bp.begin());
}

// 2-D difference array sized (nx+1) x (ny+1); x is the fast index.
class Diff2D {
 public:
  Diff2D(std::size_t nx, std::size_t ny) : nx_(nx), ny_(ny), data_((nx + 1) * (ny + 1), 0) {}

  void clear() { std::fill(data_.begin(), data_.end(), 0); }

  void add(std::size_t i0, std::size_t i1, std::size_t j0, std::size_t j1) {
    data_[j0 * (nx_ + 1) + i0] += 1;
    data_[j0 * (nx_ + 1) + i1] -= 1;
    data_[j1 * (nx_ + 1) + i0] -= 1;
    data_[j1 * (nx_ + 1) + i1] += 1;
  }

  // In-place 2-D prefix sum; afterwards value(i, j) is the cell count.
  void integrate() {
    for (std::size_t j = 0; j <= ny_; ++j) {
      std::int32_t* row = &data_[j * (nx_ + 1)];
      for (std::size_t i = 1; i <= nx_; ++i) row[i] += row[i - 1];
    }
    for (std::size_t j = 1; j <= ny_; ++j) {
      std::int32_t* row = &data_[j * (nx_ + 1)];
      const std::int32_t* prev = &data_[(j - 1) * (nx_ + 1)];
      for (std::size_t i = 0; i <= nx_; ++i) row[i] += prev[i];
    }
  }

  std::int32_t value(std::size_t i, std::size_t j) const { return data_[j * (nx_ + 1) + i]; }

 private:
  std::size_t nx_, ny_;
  std::vector<std::int32_t> data_;
};

void stamp_active(Diff2D& diff, const SlabGrid& grid, std::span<const Box3> boxes,
                  Scalar z_lo, Scalar z_hi) {
  for (const Box3& b : boxes) {
    if (b.z.lo <= z_lo && b.z.hi >= z_hi) {
      diff.add(bp_index(grid.xs, b.x.lo), bp_index(grid.xs, b.x.hi),
               bp_index(grid.ys, b.y.lo), bp_index(grid.ys, b.y.hi));
    }
  }
}

DepthHistogram to_histogram(const std::vector<Measure>& byDepth, Measure reference) {
  DepthHistogram h;
  h.reference = reference;
  for (std::size_t d = 0; d < byDepth.size(); ++d) {
    if (byDepth[d] != 0) h.entries.emplace_back(static_cast<std::int32_t>(d), byDepth[d]);
  }
  return h;
}

} // namespace

Measure DepthHistogram::total() const {
  Measure t = 0;
  for (const auto& [d, m] : entries) t += m;
  return t;
}

Measure DepthHistogram::at(std::int32_t depth) const {
  for (const auto& [d, m] : entries)
    if (d == depth) return m;
  return 0;
}

Measure JointDepthHistogram::total() const {
  Measure t = 0;
  for (const Entry& e : entries) t += e.measure;
  return t;
}

DepthHistogram JointDepthHistogram::marginal_r() const {
  std::map<std::int32_t, Measure> acc;
  for (const Entry& e : entries) acc[e.r] += e.measure;
  DepthHistogram h;
  h.reference = reference;
  for (const auto& [d, m] : acc) h.entries.emplace_back(d, m);
  return h;
}

DepthHistogram JointDepthHistogram::marginal_s() const {
  std::map<std::int32_t, Measure> acc;
  for (const Entry& e : entries) acc[e.s] += e.measure;
  DepthHistogram h;
  h.reference = reference;
  for (const auto& [d, m] : acc) h.entries.emplace_back(d, m);
  return h;
}

Measure union_measure(std::span<const Box3> boxes) {
  if (boxes.empty()) return 0;
  SlabGrid grid;
  grid.collect(boxes);
  grid.finish();
  Diff2D diff(grid.nx(), grid.ny());
  Measure covered = 0;
  for (std::size_t k = 0; k < grid.nz(); ++k) {
    const Scalar z0 = grid.zs[k], z1 = grid.zs[k + 1];
    diff.clear();
    stamp_active(diff, grid, boxes, z0, z1);
    diff.integrate();
    Measure area = 0;
    for (std::size_t j = 0; j < grid.ny(); ++j) {
      const Scalar ylen = grid.ys[j + 1] - grid.ys[j];
      for (std::size_t i = 0; i < grid.nx(); ++i) {
        if (diff.value(i, j) > 0) area += (grid.xs[i + 1] - grid.xs[i]) * ylen;
      }
    }
    covered += area * (z1 - z0);
  }
  return covered;
}

DepthHistogram depth_histogram(const Box3& region, std::span<const Box3> generators) {
  ClippedSet gens;
  gens.add_clipped(generators, region);

  SlabGrid grid;
  grid.collect(std::span<const Box3>(&region, 1));
  grid.collect(gens.boxes);
  grid.finish();

  std::vector<Measure> byDepth(gens.boxes.size() + 1, 0);
  std::vector<Measure> areaByDepth(gens.boxes.size() + 1, 0);
  Diff2D diff(grid.nx(), grid.ny());
  for (std::size_t k = 0; k < grid.nz(); ++k) {
    const Scalar z0 = grid.zs[k], z1 = grid.zs[k + 1];
    diff.clear();
    stamp_active(diff, grid, gens.boxes, z0, z1);
    diff.integrate();
    std::fill(areaByDepth.begin(), areaByDepth.end(), 0);
    for (std::size_t j = 0; j < grid.ny(); ++j) {
      const Scalar ylen = grid.ys[j + 1] - grid.ys[j];
      for (std::size_t i = 0; i < grid.nx(); ++i) {
        areaByDepth[diff.value(i, j)] += (grid.xs[i + 1] - grid.xs[i]) * ylen;
      }
    }
    const Scalar zlen = z1 - z0;
    for (std::size_t d = 0; d < byDepth.size(); ++d) byDepth[d] += areaByDepth[d] * zlen;
  }
  return to_histogram(byDepth, region.volume());
}

DepthHistogram union_region_histogram(std::span<const Box3> region_boxes,
                                      std::span<const Box3> generators) {
  if (region_boxes.empty()) {
    DepthHistogram empty;
    empty.reference = 0;
    return empty;
  }
  const Box3 window = bounding_box(region_boxes);
  ClippedSet gens;
  gens.add_clipped(generators, window);

  SlabGrid grid;
  grid.collect(region_boxes);
  grid.collect(gens.boxes);
  grid.finish();

  std::vector<Measure> byDepth(gens.boxes.size() + 1, 0);
  std::vector<Measure> areaByDepth(gens.boxes.size() + 1, 0);
  Diff2D cover(grid.nx(), grid.ny());
  Diff2D depth(grid.nx(), grid.ny());
  Measure reference = 0;
  for (std::size_t k = 0; k < grid.nz(); ++k) {
    const Scalar z0 = grid.zs[k], z1 = grid.zs[k + 1];
    cover.clear();
    depth.clear();
    stamp_active(cover, grid, region_boxes, z0, z1);
    stamp_active(depth, grid, gens.boxes, z0, z1);
    cover.integrate();
    depth.integrate();
    std::fill(areaByDepth.begin(), areaByDepth.end(), 0);
    Measure regionArea = 0;
    for (std::size_t j = 0; j < grid.ny(); ++j) {
      const Scalar ylen = grid.ys[j + 1] - grid.ys[j];
      for (std::size_t i = 0; i < grid.nx(); ++i) {
        if (cover.value(i, j) > 0) {
          const Measure a = (grid.xs[i + 1] - grid.xs[i]) * ylen;
          regionArea += a;
          areaByDepth[depth.value(i, j)] += a;
        }
      }
    }
    const Scalar zlen = z1 - z0;
    reference += regionArea * zlen;
    for (std::size_t d = 0; d < byDepth.size(); ++d) byDepth[d] += areaByDepth[d] * zlen;
  }
  DepthHistogram h = to_histogram(byDepth, reference);
  return h;
}

JointDepthHistogram joint_depth_histogram(const Box3& region, std::span<const Box3> class1,
                                          std::span<const Box3> class2) {
  ClippedSet c1, c2;
  c1.add_clipped(class1, region);
  c2.add_clipped(class2, region);

  SlabGrid grid;
  grid.collect(std::span<const Box3>(&region, 1));
  grid.collect(c1.boxes);
  grid.collect(c2.boxes);
  grid.finish();

  const std::size_t R = c1.boxes.size() + 1, S = c2.boxes.size() + 1;
  std::vector<Measure> byPair(R * S, 0);
  std::vector<Measure> areaByPair(R * S, 0);
  Diff2D d1(grid.nx(), grid.ny());
  Diff2D d2(grid.nx(), grid.ny());
  for (std::size_t k = 0; k < grid.nz(); ++k) {
    const Scalar z0 = grid.zs[k], z1 = grid.zs[k + 1];
    d1.clear();
    d2.clear();
    stamp_active(d1, grid, c1.boxes, z0, z1);
    stamp_active(d2, grid, c2.boxes, z0, z1);
    d1.integrate();
    d2.integrate();
    std::fill(areaByPair.begin(), areaByPair.end(), 0);
    for (std::size_t j = 0; j < grid.ny(); ++j) {
      const Scalar ylen = grid.ys[j + 1] - grid.ys[j];
      for (std::size_t i = 0; i < grid.nx(); ++i) {
        areaByPair[d1.value(i, j) * S + d2.value(i, j)] += (grid.xs[i + 1] - grid.xs[i]) * ylen;
      }
    }
    const Scalar zlen = z1 - z0;
    for (std::size_t p = 0; p < byPair.size(); ++p) byPair[p] += areaByPair[p] * zlen;
  }

  JointDepthHistogram joint;
  joint.reference = region.volume();
  for (std::size_t r = 0; r < R; ++r) {
    for (std::size_t s = 0; s < S; ++s) {
      if (byPair[r * S + s] != 0) {
        joint.entries.push_back({static_cast<std::int32_t>(r), static_cast<std::int32_t>(s),
                                 byPair[r * S + s]});
      }
    }
  }
  return joint;
}

Measure intersection_union_measure(const Box3& region, std::span<const Box3> boxes) {
  ClippedSet clipped;
  clipped.add_clipped(boxes, region);
  return union_measure(clipped.boxes);
}

double exp_integral(const DepthHistogram& h, double c) {
  if (!(c > 0)) {
    throw std::invalid_argument("exp_integral: c must be positive");
  }
  double sum = 0.0;
  for (const auto& [d, m] : h.entries) {
    if (c * d > 700.0) {
      throw ExpOverflowError("exp_integral: depth " + std::to_string(d) +
                             " exceeds the e^{ck} range (700/c)");
    }
    sum += static_cast<double>(m) * std::exp(c * d);
  }
  if (!std::isfinite(sum)) {
    throw ExpOverflowError("exp_integral: sum left the double range");
  }
  return sum;
}

} // namespace zyg
