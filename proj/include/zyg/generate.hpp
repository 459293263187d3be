#pragma once

#include <cstdint>
#include <string>

#include "zyg/geometry.hpp"
#include "zyg/selection.hpp"

namespace zyg {

enum class FamilyKind { Zygmund, Adversarial };

std::string to_string(FamilyKind kind);
FamilyKind family_kind_from_string(const std::string& s);

/// Parameters of the random monotone side-length table. Sample side lengths
/// per axis grow by cumulative increments in [1, max_side_step]; the table
/// values are two-dimensional cumulative sums of increments in
/// [0, max_increment] (first entry at least 1), which makes the table
/// nondecreasing in each variable by construction. max_increment = 0 yields
/// the trivial table phi == 1.
struct ProfileSpec {
  int x_samples = 6;
  int y_samples = 6;
  Scalar max_side_step = 8;
  Scalar max_increment = 3;
};

struct ExperimentConfig {
  std::uint64_t seed = 42;
  int n_boxes = 100;
  Scalar coordinate_range = 256;
  ProfileSpec profile;
  SelectionParams params;
  int trial_count = 1;
  FamilyKind kind = FamilyKind::Zygmund;
};

/// Draws a random monotone table and n boxes with side lengths
/// (x, y, phi(x, y)) from it, positioned uniformly in the coordinate range.
/// The output always passes validate_zygmund. `trial` selects the RNG stream.
BoxFamily generate_zygmund_family(const ExperimentConfig& cfg, int trial = 0);

/// Family in which, in enlistment order, every box has at least two side
/// lengths strictly smaller than those of every previous box: third sides
/// strictly decrease, and each step shrinks the running minimum of the first
/// or the second side. The certificate is checked before returning.
BoxFamily generate_adversarial_family(const ExperimentConfig& cfg, int trial = 0);

/// The two-smaller-sides certificate for an enlistment order.
bool dominated_pairwise(const BoxFamily& f);

} // namespace zyg
