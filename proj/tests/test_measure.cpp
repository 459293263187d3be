#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracle.hpp"

#include "zyg/grid.hpp"
#include "zyg/measure.hpp"
#include "zyg/rng.hpp"

using namespace zyg;

namespace {

Box3 cube(Scalar lo, Scalar hi) { return Box3({lo, hi}, {lo, hi}, {lo, hi}); }

std::vector<Box3> random_boxes(SplitMix64& rng, int n, Scalar coordMax, Scalar maxLen) {
  std::vector<Box3> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    Box3 b;
    for (int d = 0; d < 3; ++d) {
      const Scalar len = rng.range(1, maxLen);
      const Scalar lo = rng.range(0, coordMax - len);
      b.axis(d) = Interval(lo, lo + len);
    }
    out.push_back(b);
  }
  return out;
}

DepthHistogram from_map(const std::map<std::int32_t, Measure>& m, Measure reference) {
  DepthHistogram h;
  h.reference = reference;
  for (const auto& [d, v] : m) h.entries.emplace_back(d, v);
  return h;
}

} // namespace

TEST_CASE("compress examples") {
  const std::vector<Box3> one{cube(0, 2)};
  Grid3 g = compress(one);
  CHECK(g.xs == std::vector<Scalar>{0, 2});
  CHECK(g.cells() == 1);

  const std::vector<Box3> two{cube(0, 2), cube(1, 3)};
  g = compress(two);
  CHECK(g.xs == std::vector<Scalar>{0, 1, 2, 3});
  CHECK(g.cells() == 27);

  CHECK_THROWS_AS(compress({}), std::invalid_argument);
}

TEST_CASE("every box is an exact union of its grid cells") {
  SplitMix64 rng(3);
  const std::vector<Box3> boxes = random_boxes(rng, 24, 48, 12);
  const Grid3 g = compress(boxes);
  for (int a = 0; a < 3; ++a) CHECK(g.axis(a).size() <= 2 * boxes.size());
  for (const Box3& b : boxes) {
    // sum of volumes of the cells inside b equals volume(b)
    Measure sum = 0;
    for (std::size_t k = 0; k < g.nz(); ++k)
      for (std::size_t j = 0; j < g.ny(); ++j)
        for (std::size_t i = 0; i < g.nx(); ++i) {
          const bool inside = g.xs[i] >= b.x.lo && g.xs[i + 1] <= b.x.hi && g.ys[j] >= b.y.lo &&
                              g.ys[j + 1] <= b.y.hi && g.zs[k] >= b.z.lo && g.zs[k + 1] <= b.z.hi;
          if (inside) sum += g.cell_volume(i, j, k);
        }
    CHECK(sum == b.volume());
  }
}

TEST_CASE("depth field counts covering generators cell by cell") {
  SplitMix64 rng(5);
  const std::vector<Box3> boxes = random_boxes(rng, 12, 24, 8);
  const DepthField field = build_depth_field(boxes);
  const Grid3& g = field.grid;
  for (std::size_t k = 0; k < g.nz(); ++k)
    for (std::size_t j = 0; j < g.ny(); ++j)
      for (std::size_t i = 0; i < g.nx(); ++i) {
        std::int32_t expected = 0;
        for (const Box3& b : boxes) {
          if (g.xs[i] >= b.x.lo && g.xs[i + 1] <= b.x.hi && g.ys[j] >= b.y.lo &&
              g.ys[j + 1] <= b.y.hi && g.zs[k] >= b.z.lo && g.zs[k + 1] <= b.z.hi)
            ++expected;
        }
        CHECK(field.at(i, j, k) == expected);
      }
}

TEST_CASE("union measure examples") {
  CHECK(union_measure({}) == 0);
  const std::vector<Box3> two{cube(0, 2), cube(1, 3)};
  CHECK(union_measure(two) == 15); // 8 + 8 - 1
}

TEST_CASE("union measure matches the rasterization oracle") {
  SplitMix64 rng(42);
  for (int t = 0; t < 25; ++t) {
    const std::vector<Box3> boxes = random_boxes(rng, 20, 32, 10);
    CHECK(union_measure(boxes) == oracle::raster_union_measure(boxes));
  }
}

TEST_CASE("depth histogram examples") {
  const Box3 region = cube(0, 3);
  const std::vector<Box3> gens{cube(0, 2), cube(1, 3)};
  const DepthHistogram h = depth_histogram(region, gens);
  CHECK(h.reference == 27);
  CHECK(h.at(0) == 12);
  CHECK(h.at(1) == 14);
  CHECK(h.at(2) == 1);
  CHECK(h.total() == 27);

  const Box3 far = Box3({100, 104}, {100, 104}, {100, 104});
  const DepthHistogram h2 = depth_histogram(far, gens);
  CHECK(h2.entries.size() == 1);
  CHECK(h2.at(0) == far.volume());
}

TEST_CASE("depth histogram matches the rasterization oracle") {
  SplitMix64 rng(9);
  for (int t = 0; t < 20; ++t) {
    const std::vector<Box3> gens = random_boxes(rng, 15, 32, 10);
    Box3 region;
    for (int d = 0; d < 3; ++d) {
      const Scalar len = rng.range(4, 16);
      const Scalar lo = rng.range(0, 32 - len);
      region.axis(d) = Interval(lo, lo + len);
    }
    const DepthHistogram h = depth_histogram(region, gens);
    CHECK(h == from_map(oracle::raster_depth_histogram(region, gens), region.volume()));
    CHECK(h.total() == region.volume());
  }
}

TEST_CASE("union region histogram restricts to the union") {
  SplitMix64 rng(13);
  const std::vector<Box3> region = random_boxes(rng, 6, 24, 10);
  const std::vector<Box3> gens = random_boxes(rng, 8, 24, 10);
  const DepthHistogram h = union_region_histogram(region, gens);
  CHECK(h.reference == union_measure(region));
  CHECK(h.total() == h.reference);
  // union measure equals the depth >= 1 mass of the self histogram
  const DepthHistogram self = union_region_histogram(region, region);
  CHECK(self.at(0) == 0);
  CHECK(self.total() == union_measure(region));
}

TEST_CASE("joint histogram: empty class collapses to the marginal") {
  SplitMix64 rng(17);
  const std::vector<Box3> c1 = random_boxes(rng, 6, 16, 6);
  const Box3 region = cube(0, 16);
  const JointDepthHistogram joint = joint_depth_histogram(region, c1, {});
  for (const auto& e : joint.entries) CHECK(e.s == 0);
  CHECK(joint.marginal_r() == depth_histogram(region, c1));
}

TEST_CASE("joint histogram: crossing-bands fixture has a (1,1) region") {
  // One candidate box crossed by three bands spanning its full first side and
  // two bands spanning its full second side; the overlaps realize the pairs
  // (0,0), (1,0), (0,1) and (1,1).
  const Box3 region({0, 6}, {0, 6}, {0, 2});
  const std::vector<Box3> class1{Box3({-1, 7}, {0, 1}, {-1, 3}), Box3({-1, 7}, {2, 3}, {-1, 3}),
                                 Box3({-1, 7}, {4, 5}, {-1, 3})};
  const std::vector<Box3> class2{Box3({1, 2}, {-1, 7}, {-1, 3}), Box3({3, 4}, {-1, 7}, {-1, 3})};
  const JointDepthHistogram joint = joint_depth_histogram(region, class1, class2);

  auto at = [&](std::int32_t r, std::int32_t s) -> Measure {
    for (const auto& e : joint.entries)
      if (e.r == r && e.s == s) return e.measure;
    return 0;
  };
  CHECK(at(1, 1) == 12);
  CHECK(at(1, 0) == 24);
  CHECK(at(0, 1) == 12);
  CHECK(at(0, 0) == 24);
  CHECK(joint.total() == region.volume());

  const auto brute = oracle::raster_joint(region, class1, class2);
  for (const auto& e : joint.entries) {
    CHECK(brute.at({e.r, e.s}) == e.measure);
  }
}

TEST_CASE("joint histogram marginals equal the single-class histograms") {
  SplitMix64 rng(21);
  for (int t = 0; t < 10; ++t) {
    const std::vector<Box3> c1 = random_boxes(rng, 7, 24, 9);
    const std::vector<Box3> c2 = random_boxes(rng, 5, 24, 9);
    Box3 region;
    for (int d = 0; d < 3; ++d) {
      const Scalar len = rng.range(6, 14);
      const Scalar lo = rng.range(0, 24 - len);
      region.axis(d) = Interval(lo, lo + len);
    }
    const JointDepthHistogram joint = joint_depth_histogram(region, c1, c2);
    CHECK(joint.marginal_r() == depth_histogram(region, c1));
    CHECK(joint.marginal_s() == depth_histogram(region, c2));
  }
}

TEST_CASE("exp integral examples") {
  DepthHistogram flat;
  flat.entries = {{0, 1000}};
  flat.reference = 1000;
  CHECK(exp_integral(flat, 1.0) == 1000.0);
  CHECK(exp_integral(flat, 7.5) == 1000.0);

  DepthHistogram h;
  h.entries = {{1, 14}, {2, 1}};
  h.reference = 27;
  const double e = std::numbers::e;
  CHECK(exp_integral(h, 1.0) == doctest::Approx(14 * e + e * e).epsilon(1e-14));
}

TEST_CASE("exp integral is monotone in c and in dominance") {
  DepthHistogram h;
  h.entries = {{0, 5}, {1, 3}, {4, 2}};
  h.reference = 10;
  CHECK(exp_integral(h, 0.5) < exp_integral(h, 1.0));
  CHECK(exp_integral(h, 1.0) < exp_integral(h, 2.0));

  DepthHistogram dominated = h;
  dominated.entries[2].second -= 1; // pointwise smaller mass at depth 4
  CHECK(exp_integral(dominated, 1.0) < exp_integral(h, 1.0));
}

TEST_CASE("exp integral overflow guard") {
  DepthHistogram h;
  h.entries = {{800, 1}};
  h.reference = 1;
  CHECK_THROWS_AS(exp_integral(h, 1.0), ExpOverflowError);
  DepthHistogram big;
  big.entries = {{600, Measure{1} << 60}};
  big.reference = Measure{1} << 60;
  CHECK_THROWS_AS(exp_integral(big, 1.2), ExpOverflowError);
}
