#pragma once

// Test-only oracles: independent brute-force paths that pin the exact
// kernels. The rasterizers walk unit lattice cells one by one; the maximal
// oracle re-sums every breakpoint interval from scratch.

#include <map>
#include <span>
#include <utility>

#include "zyg/geometry.hpp"
#include "zyg/maximal.hpp"
#include "zyg/measure.hpp"

namespace zyg::oracle {

std::map<std::int32_t, Measure> raster_depth_histogram(const Box3& region,
                                                       std::span<const Box3> generators);

Measure raster_union_measure(std::span<const Box3> boxes);

std::map<std::pair<std::int32_t, std::int32_t>, Measure>
raster_joint(const Box3& region, std::span<const Box3> class1, std::span<const Box3> class2);

MaximalField brute_maximal(const ScalarField3& f, int axis);

Measure brute_superlevel(const ScalarField3& f, int axis, double lambda);

} // namespace zyg::oracle
