#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "zyg/geometry.hpp"
#include "zyg/grid.hpp"

namespace zyg {

/// Measure-per-depth-level table. Depth 0 (the uncovered mass of the region)
/// is always included, so the entries sum to the reference measure exactly.
struct DepthHistogram {
  std::vector<std::pair<std::int32_t, Measure>> entries; // sorted by depth, realized levels only
  Measure reference = 0;                                 // m(region)

  Measure total() const;
  Measure at(std::int32_t depth) const; // 0 when the level is not realized

  bool operator==(const DepthHistogram&) const = default;
};

/// Joint table keyed by (class-1 depth, class-2 depth).
struct JointDepthHistogram {
  struct Entry {
    std::int32_t r = 0, s = 0;
    Measure measure = 0;
    bool operator==(const Entry&) const = default;
  };
  std::vector<Entry> entries; // sorted by (r, s), realized pairs only
  Measure reference = 0;

  Measure total() const;
  DepthHistogram marginal_r() const;
  DepthHistogram marginal_s() const;
};

/// Exact Lebesgue measure of the union: sum of compressed-grid cell volumes
/// at depth >= 1. Empty input yields 0.
Measure union_measure(std::span<const Box3> boxes);

/// Exact measure, for each k >= 0, of the subset of `region` covered by
/// exactly k generators. reference = volume(region).
DepthHistogram depth_histogram(const Box3& region, std::span<const Box3> generators);

/// Same, with the region a union of boxes: measures taken over the union,
/// reference = m(union of region_boxes).
DepthHistogram union_region_histogram(std::span<const Box3> region_boxes,
                                      std::span<const Box3> generators);

/// Exact measures of {x in region : class-1 depth = r and class-2 depth = s}.
JointDepthHistogram joint_depth_histogram(const Box3& region, std::span<const Box3> class1,
                                          std::span<const Box3> class2);

/// m(region /\ union(boxes)), exact.
Measure intersection_union_measure(const Box3& region, std::span<const Box3> boxes);

struct ExpOverflowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Sum over entries of measure * e^{c * depth}. The integer coefficients are
/// the exact data; only this evaluation touches floating point. Throws
/// ExpOverflowError when c * depth exceeds 700 or the sum leaves the double
/// range (a pathological family, not a numeric bug).
double exp_integral(const DepthHistogram& h, double c = 1.0);

} // namespace zyg
