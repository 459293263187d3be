#include "zyg/geometry.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace zyg {

Interval::Interval(Scalar lo_, Scalar hi_) : lo(lo_), hi(hi_) {
  if (lo >= hi) {
    throw std::invalid_argument("Interval: requires lo < hi, got [" +
                                std::to_string(lo_) + ", " + std::to_string(hi_) + "]");
  }
}

const Interval& Box3::axis(int a) const {
  switch (a) {
    case 0: return x;
    case 1: return y;
    case 2: return z;
    default: throw std::invalid_argument("Box3::axis: axis must be 0, 1 or 2");
  }
}

Interval& Box3::axis(int a) {
  switch (a) {
    case 0: return x;
    case 1: return y;
    case 2: return z;
    default: throw std::invalid_argument("Box3::axis: axis must be 0, 1 or 2");
  }
}

std::ostream& operator<<(std::ostream& os, const Box3& b) {
  os << "[" << b.x.lo << "," << b.x.hi << "]x[" << b.y.lo << "," << b.y.hi
     << "]x[" << b.z.lo << "," << b.z.hi << "]";
  return os;
}

Box3 dilate(const Box3& b, int factor) {
  if (factor <= 0 || factor % 2 == 0) {
    throw std::invalid_argument("dilate: factor must be a positive odd integer");
  }
  const Scalar up = (factor + 1) / 2;   // (1+f)/2
  const Scalar down = (factor - 1) / 2; // (f-1)/2
  auto scale = [&](const Interval& iv) {
    return Interval(iv.lo * up - iv.hi * down, iv.hi * up - iv.lo * down);
  };
  return Box3(scale(b.x), scale(b.y), scale(b.z));
}

std::optional<Box3> intersect(const Box3& a, const Box3& b) {
  Scalar lo[3], hi[3];
  for (int d = 0; d < 3; ++d) {
    lo[d] = std::max(a.axis(d).lo, b.axis(d).lo);
    hi[d] = std::min(a.axis(d).hi, b.axis(d).hi);
    if (lo[d] >= hi[d]) return std::nullopt;
  }
  return Box3(Interval(lo[0], hi[0]), Interval(lo[1], hi[1]), Interval(lo[2], hi[2]));
}

Box3 bounding_box(std::span<const Box3> boxes) {
  if (boxes.empty()) {
    throw std::invalid_argument("bounding_box: empty box sequence");
  }
  Box3 hull = boxes.front();
  for (const Box3& b : boxes.subspan(1)) {
    for (int d = 0; d < 3; ++d) {
      hull.axis(d).lo = std::min(hull.axis(d).lo, b.axis(d).lo);
      hull.axis(d).hi = std::max(hull.axis(d).hi, b.axis(d).hi);
    }
  }
  return hull;
}

ZygmundProfile::ZygmundProfile(std::vector<ProfileSample> samples) : samples_(std::move(samples)) {
  for (const ProfileSample& s : samples_) {
    if (s.x <= 0 || s.y <= 0 || s.phi <= 0) {
      throw std::invalid_argument("ZygmundProfile: samples must be positive integers");
    }
  }
  std::sort(samples_.begin(), samples_.end(), [](const ProfileSample& a, const ProfileSample& b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
  for (std::size_t i = 1; i < samples_.size(); ++i) {
    if (samples_[i - 1].x == samples_[i].x && samples_[i - 1].y == samples_[i].y) {
      throw std::invalid_argument("ZygmundProfile: duplicate sample pair");
    }
  }
}

std::optional<Scalar> ZygmundProfile::lookup(Scalar x, Scalar y) const {
  ProfileSample probe{x, y, 1};
  auto it = std::lower_bound(samples_.begin(), samples_.end(), probe,
                             [](const ProfileSample& a, const ProfileSample& b) {
                               return a.x != b.x ? a.x < b.x : a.y < b.y;
                             });
  if (it != samples_.end() && it->x == x && it->y == y) return it->phi;
  return std::nullopt;
}

std::vector<std::pair<ProfileSample, ProfileSample>> ZygmundProfile::monotone_violations() const {
  std::vector<std::pair<ProfileSample, ProfileSample>> out;
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    for (std::size_t j = 0; j < samples_.size(); ++j) {
      const ProfileSample& a = samples_[i];
      const ProfileSample& b = samples_[j];
      if (a.x <= b.x && a.y <= b.y && a.phi > b.phi) out.emplace_back(a, b);
    }
  }
  return out;
}

ZygmundReport validate_zygmund(const BoxFamily& f) {
  if (!f.profile) {
    throw std::invalid_argument("validate_zygmund: family carries no profile");
  }
  ZygmundReport report;
  report.monotone_violations = f.profile->monotone_violations();
  for (std::size_t i = 0; i < f.boxes.size(); ++i) {
    const Box3& b = f.boxes[i];
    std::optional<Scalar> expected = f.profile->lookup(b.len(0), b.len(1));
    if (!expected || *expected != b.len(2)) {
      report.side_violations.push_back({i, b.len(0), b.len(1), b.len(2), expected});
    }
  }
  return report;
}

void check_family_bounds(const BoxFamily& f) {
  for (std::size_t i = 0; i < f.boxes.size(); ++i) {
    const Box3& b = f.boxes[i];
    for (int d = 0; d < 3; ++d) {
      if (b.axis(d).lo < -kCoordLimit || b.axis(d).hi > kCoordLimit) {
        throw std::invalid_argument("family bounds: box " + std::to_string(i) +
                                    " exceeds the coordinate limit 2^20");
      }
    }
  }
  if (f.boxes.empty()) return;
  std::vector<Box3> dilated;
  dilated.reserve(f.boxes.size());
  for (const Box3& b : f.boxes) dilated.push_back(dilate(b, 3));
  const Box3 hull = bounding_box(dilated);
  Wide vol = Wide(hull.len(0)) * Wide(hull.len(1)) * Wide(hull.len(2));
  if (vol > Wide(kVolumeLimit)) {
    throw std::invalid_argument("family bounds: 3-dilated hull volume exceeds 2^62");
  }
}

} // namespace zyg
