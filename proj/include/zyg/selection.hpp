#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "zyg/geometry.hpp"
#include "zyg/measure.hpp"

namespace zyg {

struct SelectionParams {
  double threshold = 3.0; // exponential-average acceptance bound
  int dilation = 3;       // odd dilation factor applied to prior selections
  double c = 1.0;         // exponent scale in e^{c * depth}

  bool canonical() const { return threshold == 3.0 && dilation == 3 && c == 1.0; }
};

/// Derived constant for the covering conclusion: 1 + 30 e / (sqrt(3) - 1),
/// the composition of the exponential-integral bound 6e with the directional
/// weak-type constant 5 / (sqrt(3) - 1). Numerically about 112.4.
double covering_ratio_bound();

/// sqrt(3) - 1, the superlevel threshold used in the rejected-set inclusion.
double rejection_level();

/// Per-candidate record of the sieve. `avg_hist` is the exact depth histogram
/// behind the tested average, kept so the decision can be replayed at the
/// integer level.
struct CandidateTrace {
  std::size_t index = 0; // position in the input family
  double avg = 1.0;      // (1/m(R)) * sum_k m_k e^{ck} over R of prior dilated depth
  bool accepted = false;
  double running_integral = 0.0; // I_k after this candidate
  DepthHistogram avg_hist;
};

struct SelectionConstants {
  double measure_ratio = 1.0; // m(union of input) / m(union of selected)
  double exp_ratio = 0.0;     // exp integral of dilated depth over the selected union, / m(selected union)
  double bound_6e = 0.0;      // the constant 6e the exp ratio is tested against
};

struct SelectionResult {
  std::vector<std::size_t> selected; // in selection order
  std::vector<std::size_t> rejected; // in scan order
  std::vector<CandidateTrace> trace; // one entry per candidate, scan order
  SelectionConstants constants;
  SelectionParams params;
  Measure union_all = 0;      // m(union of the input family)
  Measure union_selected = 0; // m(union of selected)
};

/// Stable descending sort by third side length; ties keep enlistment order.
std::vector<std::size_t> third_side_order(const BoxFamily& f);
BoxFamily order_by_third_side(const BoxFamily& f);

/// Greedy half-measure sparseness scan: keep R when
///   2 * m(R /\ union of previously kept) <= m(R)  (exact integers),
/// drop it otherwise. Every kept prefix then satisfies the sparseness
/// property exactly.
struct P1Result {
  BoxFamily kept;
  std::vector<std::size_t> kept_indices; // positions in the input family
  std::vector<std::size_t> dropped;
};
P1Result p1_filter(const BoxFamily& f);

/// The exponential selection sieve. Scans candidates in order; a candidate R
/// with prior selections R_1..R_{k-1} is accepted iff
///   (1/m(R)) \int_R exp(c * sum_j chi_{dilate(R_j)}) dm <= threshold.
/// The input must already be ordered by third side and sparseness-filtered.
///
/// The running integral I_k tracks \int over the union of selected boxes of
/// exp(c * sum chi_{R_j}) with the *undilated* selected boxes in the
/// exponent; this is the quantity that obeys I_k <= I_{k-1} + 3e m(R_k) step
/// by step. The dilated-depth integral over the selected union is evaluated
/// at the end and reported in `constants`.
SelectionResult cordoba_select(const BoxFamily& f, const SelectionParams& params = {});

/// Prior selections split against a candidate R:
///   class1: len_x >= len_x(R) and len_z >= len_z(R)  (takes precedence),
///   class2: remaining with len_y >= len_y(R) and len_z >= len_z(R),
///   unclassified: the rest. Comparisons are non-strict.
struct ClassSplit {
  std::vector<std::size_t> class1, class2, unclassified; // positions in `prior`
};
ClassSplit split_classes(const Box3& r, std::span<const Box3> prior);

/// The per-rejection product bound: with the joint histogram (r, s) of
/// dilated class-1/class-2 depth over R and the marginals a_r, b_s, checks
/// m_{r,s} * m(R) <= m~_r * m~_s exactly, where m~ applies the series
/// convention a_0 = b_0 = 1 (i.e. m~_0 = m(R)). True-proportion comparisons
/// are reported alongside. Also evaluates the two series factors
/// (sum_r a_r e^{cr}) (sum_s b_s e^{cs}) with the same convention.
struct ProductBoundReport {
  struct Violation {
    std::int32_t r = 0, s = 0;
    Measure joint = 0;     // m_{r,s}
    Measure class1 = 0;    // m~_r
    Measure class2 = 0;    // m~_s
  };
  ClassSplit split;
  JointDepthHistogram joint;
  std::vector<Violation> violations;          // against the a_0 = b_0 = 1 convention
  std::vector<Violation> true_violations;     // against true proportions
  double series_class1 = 1.0;                 // 1 + sum_{r>=1} a_r e^{cr}
  double series_class2 = 1.0;
  double series_product = 1.0;
  bool product_exceeds_threshold = false;     // series_product > threshold

  bool ok() const { return violations.empty(); }
};
ProductBoundReport product_bound_check(const Box3& r, std::span<const Box3> prior,
                                       int dilation = 3, double c = 1.0,
                                       double threshold = 3.0);

/// From-scratch verification of a selection run. Each check records both
/// sides of its inequality; failures carry the step index.
struct VerificationCheck {
  std::string name;
  bool pass = true;
  double lhs = 0.0;
  double rhs = 0.0;
  std::string detail;
};

struct VerificationReport {
  std::vector<VerificationCheck> checks;
  std::size_t candidates_replayed = 0;
  std::size_t acceptance_steps = 0;
  std::size_t replay_mismatches = 0; // sieve-soundness discrepancies

  bool pass() const;
};

/// Recomputes, independently of the stored trace: (a) the exponential bound
/// over the selected union against 6e; (b) the step and cumulative induction
/// bounds on I_k; (c) exact sparseness of the selected sequence; (d) the
/// measure ratio against the derived covering bound; (e) every rejected
/// average > threshold; plus exact replay of every tested average.
VerificationReport verify_selection(const SelectionResult& result, const BoxFamily& f);

} // namespace zyg
