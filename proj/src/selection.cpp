#include "zyg/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace zyg {

namespace {

constexpr double kRelSlack = 1e-9; // slack on e-evaluations only; integers are exact

DepthHistogram coefficients_to_histogram(const std::vector<Measure>& coef) {
  DepthHistogram h;
  for (std::size_t d = 0; d < coef.size(); ++d) {
    if (coef[d] != 0) h.entries.emplace_back(static_cast<std::int32_t>(d), coef[d]);
  }
  h.reference = h.total();
  return h;
}

// Fold the depth histogram of the new box (over undilated priors) into the
// running coefficients of \int exp(sum chi_{R_j}): covered cells move one
// level up, uncovered cells enter the union at level 1.
void apply_acceptance(std::vector<Measure>& coef, const DepthHistogram& hist) {
  std::int32_t maxd = 0;
  for (const auto& [d, m] : hist.entries) maxd = std::max(maxd, d);
  if (coef.size() < static_cast<std::size_t>(maxd) + 2) coef.resize(maxd + 2, 0);
  for (const auto& [d, m] : hist.entries) {
    if (d > 0) coef[d] -= m;
    coef[d + 1] += m;
  }
}

} // namespace

double covering_ratio_bound() {
  return 1.0 + 30.0 * std::numbers::e / (std::sqrt(3.0) - 1.0);
}

double rejection_level() { return std::sqrt(3.0) - 1.0; }

std::vector<std::size_t> third_side_order(const BoxFamily& f) {
  std::vector<std::size_t> order(f.boxes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return f.boxes[a].len(2) > f.boxes[b].len(2);
  });
  return order;
}

BoxFamily order_by_third_side(const BoxFamily& f) {
  BoxFamily out;
  out.profile = f.profile;
  out.boxes.reserve(f.boxes.size());
  for (std::size_t i : third_side_order(f)) out.boxes.push_back(f.boxes[i]);
  return out;
}

P1Result p1_filter(const BoxFamily& f) {
  P1Result result;
  result.kept.profile = f.profile;
  for (std::size_t i = 0; i < f.boxes.size(); ++i) {
    const Box3& b = f.boxes[i];
    const Measure overlap = intersection_union_measure(b, result.kept.boxes);
    if (2 * overlap <= b.volume()) {
      result.kept.boxes.push_back(b);
      result.kept_indices.push_back(i);
    } else {
      result.dropped.push_back(i);
    }
  }
  return result;
}

SelectionResult cordoba_select(const BoxFamily& f, const SelectionParams& params) {
  if (params.dilation <= 0 || params.dilation % 2 == 0) {
    throw std::invalid_argument("cordoba_select: dilation must be a positive odd integer");
  }
  if (!(params.threshold > 0) || !(params.c > 0)) {
    throw std::invalid_argument("cordoba_select: threshold and c must be positive");
  }

  SelectionResult result;
  result.params = params;

  std::vector<Box3> selected_boxes;
  std::vector<Box3> dilated_selected;
  std::vector<Measure> coef; // exact coefficients of the running integral
  double running = 0.0;

  for (std::size_t i = 0; i < f.boxes.size(); ++i) {
    const Box3& box = f.boxes[i];
    CandidateTrace t;
    t.index = i;
    try {
      t.avg_hist = depth_histogram(box, dilated_selected);
      t.avg = exp_integral(t.avg_hist, params.c) / static_cast<double>(box.volume());
      t.accepted = t.avg <= params.threshold;
      if (t.accepted) {
        apply_acceptance(coef, depth_histogram(box, selected_boxes));
        running = exp_integral(coefficients_to_histogram(coef), params.c);
        selected_boxes.push_back(box);
        dilated_selected.push_back(dilate(box, params.dilation));
        result.selected.push_back(i);
      } else {
        result.rejected.push_back(i);
      }
    } catch (const ExpOverflowError& e) {
      throw ExpOverflowError("candidate " + std::to_string(i) + ": " + e.what());
    }
    t.running_integral = running;
    result.trace.push_back(std::move(t));
  }

  result.union_all = union_measure(f.boxes);
  result.union_selected = union_measure(selected_boxes);
  result.constants.bound_6e = 6.0 * std::numbers::e;
  if (result.union_selected > 0) {
    result.constants.measure_ratio =
        static_cast<double>(result.union_all) / static_cast<double>(result.union_selected);
    const DepthHistogram over_union = union_region_histogram(selected_boxes, dilated_selected);
    result.constants.exp_ratio =
        exp_integral(over_union, params.c) / static_cast<double>(result.union_selected);
  } else {
    result.constants.measure_ratio = 1.0;
    result.constants.exp_ratio = 0.0;
  }
  return result;
}

ClassSplit split_classes(const Box3& r, std::span<const Box3> prior) {
  ClassSplit split;
  for (std::size_t j = 0; j < prior.size(); ++j) {
    const Box3& p = prior[j];
    if (p.len(0) >= r.len(0) && p.len(2) >= r.len(2)) {
      split.class1.push_back(j);
    } else if (p.len(1) >= r.len(1) && p.len(2) >= r.len(2)) {
      split.class2.push_back(j);
    } else {
      split.unclassified.push_back(j);
    }
  }
  return split;
}

ProductBoundReport product_bound_check(const Box3& r, std::span<const Box3> prior, int dilation,
                                       double c, double threshold) {
  ProductBoundReport report;
  report.split = split_classes(r, prior);

  std::vector<Box3> dil1, dil2;
  dil1.reserve(report.split.class1.size());
  dil2.reserve(report.split.class2.size());
  for (std::size_t j : report.split.class1) dil1.push_back(dilate(prior[j], dilation));
  for (std::size_t j : report.split.class2) dil2.push_back(dilate(prior[j], dilation));

  report.joint = joint_depth_histogram(r, dil1, dil2);
  const Measure mR = r.volume();
  const DepthHistogram marg1 = report.joint.marginal_r();
  const DepthHistogram marg2 = report.joint.marginal_s();

  auto conv = [&](const DepthHistogram& marg, std::int32_t level) {
    return level == 0 ? mR : marg.at(level);
  };

  for (const JointDepthHistogram::Entry& e : report.joint.entries) {
    const Measure c1 = conv(marg1, e.r);
    const Measure c2 = conv(marg2, e.s);
    if (Wide(e.measure) * Wide(mR) > Wide(c1) * Wide(c2)) {
      report.violations.push_back({e.r, e.s, e.measure, c1, c2});
    }
    const Measure t1 = marg1.at(e.r);
    const Measure t2 = marg2.at(e.s);
    if (Wide(e.measure) * Wide(mR) > Wide(t1) * Wide(t2)) {
      report.true_violations.push_back({e.r, e.s, e.measure, t1, t2});
    }
  }

  auto series = [&](const DepthHistogram& marg) {
    double sum = 1.0; // convention: the depth-0 coefficient is 1
    for (const auto& [d, m] : marg.entries) {
      if (d > 0) sum += static_cast<double>(m) / static_cast<double>(mR) * std::exp(c * d);
    }
    return sum;
  };
  report.series_class1 = series(marg1);
  report.series_class2 = series(marg2);
  report.series_product = report.series_class1 * report.series_class2;
  report.product_exceeds_threshold = report.series_product > threshold;
  return report;
}

bool VerificationReport::pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const VerificationCheck& c) { return c.pass; });
}

VerificationReport verify_selection(const SelectionResult& result, const BoxFamily& f) {
  VerificationReport report;
  const SelectionParams& params = result.params;
  const double threeE = 3.0 * std::numbers::e;

  auto add = [&](const std::string& name, bool pass, double lhs, double rhs,
                 const std::string& detail = "") {
    report.checks.push_back({name, pass, lhs, rhs, detail});
  };

  // Partition: trace covers the whole family in order and the index lists
  // agree with the accept flags.
  {
    bool ok = result.trace.size() == f.boxes.size() &&
              result.selected.size() + result.rejected.size() == f.boxes.size();
    std::size_t si = 0, ri = 0;
    for (std::size_t i = 0; ok && i < result.trace.size(); ++i) {
      const CandidateTrace& t = result.trace[i];
      if (t.index != i) ok = false;
      if (t.accepted) {
        if (si >= result.selected.size() || result.selected[si++] != i) ok = false;
      } else {
        if (ri >= result.rejected.size() || result.rejected[ri++] != i) ok = false;
      }
    }
    add("partition", ok, static_cast<double>(result.selected.size()),
        static_cast<double>(result.rejected.size()));
    if (!ok) return report; // the remaining replay would index garbage
  }

  std::vector<Box3> sel, dil;
  std::vector<Measure> coef;
  double prevI = 0.0;
  Measure selected_volume_sum = 0;
  Measure worst_sparseness = std::numeric_limits<Measure>::min();
  double worst_step = 0.0, worst_cumulative = 0.0;
  std::size_t worst_step_at = 0, worst_cumulative_at = 0;
  double min_rejected_avg = std::numeric_limits<double>::infinity();
  double max_selected_avg = 0.0;
  bool monotone = true;

  for (const CandidateTrace& t : result.trace) {
    const Box3& box = f.boxes[t.index];
    const DepthHistogram hist = depth_histogram(box, dil);
    const double avg = exp_integral(hist, params.c) / static_cast<double>(box.volume());
    ++report.candidates_replayed;

    if (avg != t.avg) ++report.replay_mismatches;
    if (t.avg_hist.reference > 0 && !(hist == t.avg_hist)) ++report.replay_mismatches;
    const bool accept = avg <= params.threshold;
    if (accept != t.accepted) ++report.replay_mismatches;

    if (accept) {
      ++report.acceptance_steps;
      max_selected_avg = std::max(max_selected_avg, avg);

      const Measure overlap = intersection_union_measure(box, sel);
      worst_sparseness = std::max(worst_sparseness, 2 * overlap - box.volume());

      apply_acceptance(coef, depth_histogram(box, sel));
      const double I = exp_integral(coefficients_to_histogram(coef), params.c);
      selected_volume_sum += box.volume();
      const double stepBound = threeE * static_cast<double>(box.volume());
      const double cumBound = threeE * static_cast<double>(selected_volume_sum);
      const double stepRatio = (I - prevI) / stepBound;
      const double cumRatio = I / cumBound;
      if (stepRatio > worst_step) {
        worst_step = stepRatio;
        worst_step_at = t.index;
      }
      if (cumRatio > worst_cumulative) {
        worst_cumulative = cumRatio;
        worst_cumulative_at = t.index;
      }
      if (I < prevI * (1.0 - kRelSlack)) monotone = false;
      prevI = I;
      sel.push_back(box);
      dil.push_back(dilate(box, params.dilation));
    } else {
      min_rejected_avg = std::min(min_rejected_avg, avg);
    }
  }

  add("sieve_replay", report.replay_mismatches == 0,
      static_cast<double>(report.replay_mismatches), 0.0,
      "recomputed averages, histograms and decisions vs the trace");
  add("selected_averages", max_selected_avg <= params.threshold, max_selected_avg,
      params.threshold);
  add("rejected_averages",
      result.rejected.empty() || min_rejected_avg > params.threshold,
      result.rejected.empty() ? 0.0 : min_rejected_avg, params.threshold);
  add("induction_step", worst_step <= 1.0 + kRelSlack && monotone, worst_step, 1.0,
      "max over steps of (I_k - I_{k-1}) / (3e m(R_k)), worst at candidate " +
          std::to_string(worst_step_at));
  add("induction_cumulative", worst_cumulative <= 1.0 + kRelSlack, worst_cumulative, 1.0,
      "max over steps of I_k / (3e sum m(R_j)), worst at candidate " +
          std::to_string(worst_cumulative_at));
  add("sparseness_selected",
      sel.empty() || worst_sparseness <= 0,
      sel.empty() ? 0.0 : static_cast<double>(worst_sparseness), 0.0,
      "max over k of 2 m(R_k /\\ union of prior selected) - m(R_k), exact integers");

  // Final coefficients must agree with a from-scratch histogram of the
  // selected union; this pins the incremental bookkeeping to the kernel.
  {
    const DepthHistogram from_scratch = union_region_histogram(sel, sel);
    const DepthHistogram incremental = coefficients_to_histogram(coef);
    add("final_coefficients", incremental == from_scratch,
        static_cast<double>(incremental.total()), static_cast<double>(from_scratch.total()),
        "incremental running-integral coefficients vs full recomputation");
  }

  const Measure union_sel = union_measure(sel);
  const Measure union_all = union_measure(f.boxes);
  if (union_all != result.union_all || union_sel != result.union_selected) {
    ++report.replay_mismatches;
    for (VerificationCheck& c : report.checks) {
      if (c.name == "sieve_replay") { // recorded measures are part of the replay
        c.pass = false;
        c.lhs = static_cast<double>(report.replay_mismatches);
      }
    }
  }

  if (union_sel > 0) {
    const DepthHistogram over_union = union_region_histogram(sel, dil);
    const double expIntegral = exp_integral(over_union, params.c);
    const double bound = 6.0 * std::numbers::e * static_cast<double>(union_sel);
    add("exp_bound_6e", expIntegral <= bound * (1.0 + kRelSlack), expIntegral, bound,
        "integral of exp(c * dilated selected depth) over the selected union");

    const double ratio = static_cast<double>(union_all) / static_cast<double>(union_sel);
    add("measure_ratio", ratio <= covering_ratio_bound(), ratio, covering_ratio_bound());

    std::vector<Box3> rej;
    rej.reserve(result.rejected.size());
    for (std::size_t i : result.rejected) rej.push_back(f.boxes[i]);
    const double chainBound = 5.0 / rejection_level() * 6.0 * std::numbers::e *
                              static_cast<double>(union_sel);
    const double rejMeasure = static_cast<double>(union_measure(rej));
    add("rejected_chain", rejMeasure <= chainBound * (1.0 + kRelSlack), rejMeasure, chainBound,
        "m(union of rejected) vs (5/(sqrt(3)-1)) * 6e * m(union of selected)");
  } else {
    add("exp_bound_6e", true, 0.0, 0.0, "no selected boxes");
    add("measure_ratio", union_all == 0, static_cast<double>(union_all), 0.0);
    add("rejected_chain", result.rejected.empty(), static_cast<double>(result.rejected.size()),
        0.0);
  }

  return report;
}

} // namespace zyg
