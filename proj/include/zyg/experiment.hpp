#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "zyg/family_io.hpp"
#include "zyg/generate.hpp"
#include "zyg/maximal.hpp"
#include "zyg/selection.hpp"

namespace zyg {

/// One trial of the pipeline: generate, validate, order, sparseness-filter,
/// select, verify, per-rejection product bound, rejected-set inclusion.
struct TrialOutcome {
  int trial = 0;
  FamilyKind kind = FamilyKind::Zygmund;
  BoxFamily original;           // as generated (enlistment order)
  PreparedFamily prep;          // sieve input
  SelectionResult sel;          // positions into prep.family
  VerificationReport ver;
  InclusionReport incl;
  std::size_t product_checked = 0;
  std::size_t product_violations = 0;      // against the a_0 = b_0 = 1 convention
  std::size_t product_true_violations = 0; // against true proportions (reported only)
  std::size_t unclassified_total = 0;      // priors fitting neither class, summed
  std::size_t series_not_exceeding = 0;    // rejected whose series product <= threshold
  Measure union_original = 0;
  Measure union_rejected = 0;
  double original_ratio = 1.0; // m(union of the generated family) / m(union of selected)
  DepthHistogram exp_hist;     // dilated selected depth over the selected union
  bool family_valid = true;    // zygmund validation or adversarial certificate
  bool pass = true;
  std::string failure;         // non-empty when a stage threw

  bool checks_pass() const;
};

struct ExperimentBundle {
  ExperimentConfig cfg;
  std::vector<TrialOutcome> trials;
  double max_measure_ratio = 0.0;
  double max_exp_ratio = 0.0;
  double max_original_ratio = 0.0;
  std::size_t total_product_violations = 0;
  std::size_t total_inclusion_violations = 0;
  bool all_pass = true;
};

TrialOutcome run_single_trial(const ExperimentConfig& cfg, int trial);
ExperimentBundle run_experiment(const ExperimentConfig& cfg);

/// Writes the bundle: summary.json, trials.csv, per-trial depth-histogram
/// CSVs, a planar section of the first trial, and a replayable family dump
/// for failed trials.
void emit_report(const ExperimentBundle& bundle, const std::filesystem::path& dir);

/// Planar sections: 2-D cell decomposition at the slab starting at z.
/// Rows: x_lo,x_hi,y_lo,y_hi,depth.
std::string section_depth_csv(std::span<const Box3> boxes, Scalar z);
/// Rows over a candidate region with two generator classes:
/// x_lo,x_hi,y_lo,y_hi,r,s.
std::string section_pair_csv(const Box3& region, std::span<const Box3> class1,
                             std::span<const Box3> class2, Scalar z);

} // namespace zyg
