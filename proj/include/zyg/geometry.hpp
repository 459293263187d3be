#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

namespace zyg {

// All geometry lives on a global integer lattice: endpoints are integers and
// every measure is an exact integer in lattice units cubed. The only
// irrational quantity in the whole pipeline is e, and it is isolated in
// exp_integral().
using Scalar = std::int64_t;
using Measure = std::int64_t;
using Wide = __int128; // exact products of measures

// Families are rejected at load time when coordinates exceed this bound, so
// dilation endpoints and every accumulated measure stay exact in 64 bits.
inline constexpr Scalar kCoordLimit = Scalar{1} << 20;
inline constexpr Measure kVolumeLimit = Measure{1} << 62;

/// Closed interval [lo, hi] with lo < hi (nonempty, nondegenerate).
struct Interval {
  Scalar lo = 0;
  Scalar hi = 1;

  Interval() = default;
  Interval(Scalar lo_, Scalar hi_);

  Scalar length() const { return hi - lo; }
  bool operator==(const Interval&) const = default;
};

/// Closed axis-parallel box in R^3 with integer endpoints and positive volume.
struct Box3 {
  Interval x, y, z;

  Box3() = default;
  Box3(Interval x_, Interval y_, Interval z_) : x(x_), y(y_), z(z_) {}

  const Interval& axis(int a) const;
  Interval& axis(int a);
  Scalar len(int a) const { return axis(a).length(); }
  Measure volume() const { return x.length() * y.length() * z.length(); }

  bool operator==(const Box3&) const = default;
};

std::ostream& operator<<(std::ostream& os, const Box3& b);

/// Box with the same center and every side length multiplied by `factor`.
/// `factor` must be a positive odd integer so the endpoints stay integral:
/// per axis [a, b] maps to [a*(1+f)/2 - b*(f-1)/2, b*(1+f)/2 - a*(f-1)/2]
/// (for f = 3 this is [2a - b, 2b - a]). No rounding is involved.
Box3 dilate(const Box3& b, int factor);

/// Intersection box when the interiors overlap; nullopt otherwise. Shared
/// faces have measure zero and count as empty.
std::optional<Box3> intersect(const Box3& a, const Box3& b);

/// Smallest box containing every box of a nonempty sequence.
Box3 bounding_box(std::span<const Box3> boxes);

struct ProfileSample {
  Scalar x = 1;
  Scalar y = 1;
  Scalar phi = 1;
  bool operator==(const ProfileSample&) const = default;
};

/// Tabulated side-length law phi(x, y). phi is defined only at the sampled
/// pairs; families are generated from the table, so arbitrary-point
/// evaluation is never needed and off-table queries return nullopt.
class ZygmundProfile {
 public:
  ZygmundProfile() = default;
  explicit ZygmundProfile(std::vector<ProfileSample> samples);

  const std::vector<ProfileSample>& samples() const { return samples_; }
  std::optional<Scalar> lookup(Scalar x, Scalar y) const;

  /// Sample pairs violating monotonicity: x1 <= x2 and y1 <= y2 but
  /// phi(x1,y1) > phi(x2,y2). Empty means the table is nondecreasing in
  /// each variable separately.
  std::vector<std::pair<ProfileSample, ProfileSample>> monotone_violations() const;

 private:
  std::vector<ProfileSample> samples_; // sorted by (x, y), pairs unique
};

/// Ordered box sequence; the order is the enlistment order of the selection
/// algorithm. When `profile` is present the family claims membership in the
/// class of boxes with side lengths (x, y, phi(x, y)).
struct BoxFamily {
  std::vector<Box3> boxes;
  std::optional<ZygmundProfile> profile;
};

/// Report-style validation result; never throws.
struct ZygmundReport {
  struct SideViolation {
    std::size_t box = 0;
    Scalar len_x = 0, len_y = 0, len_z = 0;
    std::optional<Scalar> expected; // nullopt: (len_x, len_y) not in the table
  };
  std::vector<SideViolation> side_violations;
  std::vector<std::pair<ProfileSample, ProfileSample>> monotone_violations;

  bool ok() const { return side_violations.empty() && monotone_violations.empty(); }
};

/// Checks every box against len_z == phi(len_x, len_y) and the profile table
/// against monotonicity. Requires f.profile to be present.
ZygmundReport validate_zygmund(const BoxFamily& f);

/// Load-time guard: coordinates within kCoordLimit and the 3-dilated hull
/// volume within kVolumeLimit. Throws std::invalid_argument on violation.
void check_family_bounds(const BoxFamily& f);

} // namespace zyg
