#include "zyg/generate.hpp"

#include <cassert>
#include <stdexcept>

#include "zyg/rng.hpp"

namespace zyg {

std::string to_string(FamilyKind kind) {
  return kind == FamilyKind::Zygmund ? "zygmund" : "adversarial";
}

FamilyKind family_kind_from_string(const std::string& s) {
  if (s == "zygmund") return FamilyKind::Zygmund;
  if (s == "adversarial") return FamilyKind::Adversarial;
  throw std::invalid_argument("unknown family kind: " + s);
}

namespace {

void check_config(const ExperimentConfig& cfg) {
  if (cfg.n_boxes <= 0) throw std::invalid_argument("config: n_boxes must be positive");
  if (cfg.coordinate_range <= 0) {
    throw std::invalid_argument("config: coordinate_range must be positive");
  }
  if (cfg.profile.x_samples <= 0 || cfg.profile.y_samples <= 0 ||
      cfg.profile.max_side_step <= 0 || cfg.profile.max_increment < 0) {
    throw std::invalid_argument("config: invalid profile spec");
  }
}

std::vector<Scalar> cumulative_lengths(SplitMix64& rng, int count, Scalar step) {
  std::vector<Scalar> out;
  out.reserve(count);
  Scalar v = 0;
  for (int i = 0; i < count; ++i) {
    v += rng.range(1, step);
    out.push_back(v);
  }
  return out;
}

} // namespace

BoxFamily generate_zygmund_family(const ExperimentConfig& cfg, int trial) {
  check_config(cfg);
  SplitMix64 rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(trial)));

  // Draw order: x sample lengths, y sample lengths, table increments
  // (row-major), then per box (i, j, lo_x, lo_y, lo_z).
  const std::vector<Scalar> xlens = cumulative_lengths(rng, cfg.profile.x_samples,
                                                       cfg.profile.max_side_step);
  const std::vector<Scalar> ylens = cumulative_lengths(rng, cfg.profile.y_samples,
                                                       cfg.profile.max_side_step);

  const std::size_t nxs = xlens.size(), nys = ylens.size();
  std::vector<Scalar> table(nxs * nys);
  for (std::size_t i = 0; i < nxs; ++i) {
    for (std::size_t j = 0; j < nys; ++j) {
      Scalar inc = (i == 0 && j == 0) ? rng.range(1, std::max<Scalar>(1, cfg.profile.max_increment))
                                      : rng.range(0, cfg.profile.max_increment);
      Scalar above = i > 0 ? table[(i - 1) * nys + j] : 0;
      Scalar left = j > 0 ? table[i * nys + (j - 1)] : 0;
      Scalar diag = (i > 0 && j > 0) ? table[(i - 1) * nys + (j - 1)] : 0;
      table[i * nys + j] = above + left - diag + inc; // 2-D cumulative sum
    }
  }

  std::vector<ProfileSample> samples;
  samples.reserve(nxs * nys);
  for (std::size_t i = 0; i < nxs; ++i)
    for (std::size_t j = 0; j < nys; ++j)
      samples.push_back({xlens[i], ylens[j], table[i * nys + j]});

  BoxFamily family;
  family.profile = ZygmundProfile(std::move(samples));
  family.boxes.reserve(cfg.n_boxes);
  for (int b = 0; b < cfg.n_boxes; ++b) {
    const std::size_t i = rng.bounded(nxs);
    const std::size_t j = rng.bounded(nys);
    const Scalar lx = xlens[i], ly = ylens[j], lz = table[i * nys + j];
    const Scalar px = rng.range(0, cfg.coordinate_range);
    const Scalar py = rng.range(0, cfg.coordinate_range);
    const Scalar pz = rng.range(0, cfg.coordinate_range);
    family.boxes.emplace_back(Interval(px, px + lx), Interval(py, py + ly),
                              Interval(pz, pz + lz));
  }
  check_family_bounds(family);
  assert(validate_zygmund(family).ok());
  return family;
}

bool dominated_pairwise(const BoxFamily& f) {
  for (std::size_t k = 1; k < f.boxes.size(); ++k) {
    for (std::size_t j = 0; j < k; ++j) {
      int smaller = 0;
      for (int d = 0; d < 3; ++d) {
        if (f.boxes[k].len(d) < f.boxes[j].len(d)) ++smaller;
      }
      if (smaller < 2) return false;
    }
  }
  return true;
}

BoxFamily generate_adversarial_family(const ExperimentConfig& cfg, int trial) {
  check_config(cfg);
  SplitMix64 rng(mix_seed(cfg.seed ^ 0xADEADBEEFULL, static_cast<std::uint64_t>(trial)));
  const Scalar n = cfg.n_boxes;

  BoxFamily family;
  family.boxes.reserve(cfg.n_boxes);
  // Third sides strictly decrease; each step shrinks the running minimum of
  // the first or the second side by one, and the non-shrunk side is drawn at
  // or above its running minimum, so every later box is strictly smaller than
  // every earlier one in the shrunk side and in the third side.
  Scalar z = n + 1 + rng.range(0, n);
  Scalar minA = n + 1 + rng.range(0, n);
  Scalar minB = n + 1 + rng.range(0, n);
  Scalar a = minA, b = minB;
  for (int k = 0; k < cfg.n_boxes; ++k) {
    if (k > 0) {
      z -= 1;
      if (rng.bounded(2) == 0) {
        a = --minA;
        b = rng.range(minB, 3 * n);
      } else {
        a = rng.range(minA, 3 * n);
        b = --minB;
      }
    }
    const Scalar px = rng.range(0, cfg.coordinate_range);
    const Scalar py = rng.range(0, cfg.coordinate_range);
    const Scalar pz = rng.range(0, cfg.coordinate_range);
    family.boxes.emplace_back(Interval(px, px + a), Interval(py, py + b),
                              Interval(pz, pz + z));
  }
  check_family_bounds(family);
  if (!dominated_pairwise(family)) {
    throw std::logic_error("generate_adversarial_family: certificate failed");
  }
  return family;
}

} // namespace zyg
