#include "zyg/experiment.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace zyg {

using nlohmann::json;

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// 2-D cell decomposition of the slab starting at z for a box list; callback
// receives (x-cell, y-cell, depth per generator list).
struct PlaneCells {
  std::vector<Scalar> xs, ys;
  std::vector<std::vector<std::int32_t>> depth; // one layer per generator list

  static PlaneCells build(std::span<const std::span<const Box3>> lists, Scalar z) {
    PlaneCells plane;
    for (const auto& list : lists) {
      for (const Box3& b : list) {
        if (b.z.lo <= z && b.z.hi > z) {
          plane.xs.push_back(b.x.lo);
          plane.xs.push_back(b.x.hi);
          plane.ys.push_back(b.y.lo);
          plane.ys.push_back(b.y.hi);
        }
      }
    }
    auto dedup = [](std::vector<Scalar>& v) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    dedup(plane.xs);
    dedup(plane.ys);
    if (plane.xs.size() < 2 || plane.ys.size() < 2) return plane;
    const std::size_t nx = plane.xs.size() - 1, ny = plane.ys.size() - 1;
    for (const auto& list : lists) {
      std::vector<std::int32_t> layer(nx * ny, 0);
      for (const Box3& b : list) {
        if (!(b.z.lo <= z && b.z.hi > z)) continue;
        const auto i0 = std::lower_bound(plane.xs.begin(), plane.xs.end(), b.x.lo) -
                        plane.xs.begin();
        const auto i1 = std::lower_bound(plane.xs.begin(), plane.xs.end(), b.x.hi) -
                        plane.xs.begin();
        const auto j0 = std::lower_bound(plane.ys.begin(), plane.ys.end(), b.y.lo) -
                        plane.ys.begin();
        const auto j1 = std::lower_bound(plane.ys.begin(), plane.ys.end(), b.y.hi) -
                        plane.ys.begin();
        for (auto j = j0; j < j1; ++j)
          for (auto i = i0; i < i1; ++i) layer[j * nx + i] += 1;
      }
      plane.depth.push_back(std::move(layer));
    }
    return plane;
  }
};

} // namespace

bool TrialOutcome::checks_pass() const {
  return failure.empty() && family_valid && ver.pass() && incl.pass() &&
         product_violations == 0 && original_ratio <= covering_ratio_bound();
}

TrialOutcome run_single_trial(const ExperimentConfig& cfg, int trial) {
  TrialOutcome out;
  out.trial = trial;
  out.kind = cfg.kind;
  try {
    out.original = cfg.kind == FamilyKind::Zygmund ? generate_zygmund_family(cfg, trial)
                                                   : generate_adversarial_family(cfg, trial);
    out.family_valid = cfg.kind == FamilyKind::Zygmund
                           ? validate_zygmund(out.original).ok()
                           : dominated_pairwise(out.original);
    out.prep = prepare_family(out.original);
    out.sel = cordoba_select(out.prep.family, cfg.params);
    out.ver = verify_selection(out.sel, out.prep.family);
    out.incl = rejected_inclusion_check(out.sel, out.prep.family);

    // Product bound per rejected candidate, against the prior selected prefix.
    std::vector<Box3> prior;
    for (const CandidateTrace& t : out.sel.trace) {
      const Box3& box = out.prep.family.boxes[t.index];
      if (t.accepted) {
        prior.push_back(box);
        continue;
      }
      const ProductBoundReport pb =
          product_bound_check(box, prior, cfg.params.dilation, cfg.params.c,
                              cfg.params.threshold);
      ++out.product_checked;
      out.product_violations += pb.violations.size();
      out.product_true_violations += pb.true_violations.size();
      out.unclassified_total += pb.split.unclassified.size();
      if (!pb.product_exceeds_threshold) ++out.series_not_exceeding;
    }

    std::vector<Box3> selected, dilated, rejected;
    for (std::size_t i : out.sel.selected) {
      selected.push_back(out.prep.family.boxes[i]);
      dilated.push_back(dilate(out.prep.family.boxes[i], cfg.params.dilation));
    }
    for (std::size_t i : out.sel.rejected) rejected.push_back(out.prep.family.boxes[i]);
    out.union_original = union_measure(out.original.boxes);
    out.union_rejected = union_measure(rejected);
    out.exp_hist = union_region_histogram(selected, dilated);
    out.original_ratio = out.sel.union_selected > 0
                             ? static_cast<double>(out.union_original) /
                                   static_cast<double>(out.sel.union_selected)
                             : 1.0;
  } catch (const std::exception& e) {
    out.failure = e.what();
  }
  out.pass = out.checks_pass();
  return out;
}

ExperimentBundle run_experiment(const ExperimentConfig& cfg) {
  if (cfg.trial_count < 0) throw std::invalid_argument("run_experiment: negative trial count");
  ExperimentBundle bundle;
  bundle.cfg = cfg;
  bundle.trials.reserve(cfg.trial_count);
  for (int t = 0; t < cfg.trial_count; ++t) {
    TrialOutcome out = run_single_trial(cfg, t);
    bundle.max_measure_ratio = std::max(bundle.max_measure_ratio, out.sel.constants.measure_ratio);
    bundle.max_exp_ratio = std::max(bundle.max_exp_ratio, out.sel.constants.exp_ratio);
    bundle.max_original_ratio = std::max(bundle.max_original_ratio, out.original_ratio);
    bundle.total_product_violations += out.product_violations;
    bundle.total_inclusion_violations += out.incl.violation_count;
    bundle.all_pass = bundle.all_pass && out.pass;
    bundle.trials.push_back(std::move(out));
  }
  return bundle;
}

void emit_report(const ExperimentBundle& bundle, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);

  json summary;
  summary["config"] = json::parse(config_to_json(bundle.cfg));
  summary["aggregates"] = {{"trials", bundle.trials.size()},
                           {"all_pass", bundle.all_pass},
                           {"max_measure_ratio", bundle.max_measure_ratio},
                           {"max_exp_ratio", bundle.max_exp_ratio},
                           {"max_original_ratio", bundle.max_original_ratio},
                           {"covering_ratio_bound", covering_ratio_bound()},
                           {"total_product_violations", bundle.total_product_violations},
                           {"total_inclusion_violations", bundle.total_inclusion_violations}};
  json trials = json::array();
  for (const TrialOutcome& t : bundle.trials) {
    trials.push_back({{"trial", t.trial},
                      {"kind", to_string(t.kind)},
                      {"boxes", t.original.boxes.size()},
                      {"p1_dropped", t.prep.dropped.size()},
                      {"selected", t.sel.selected.size()},
                      {"rejected", t.sel.rejected.size()},
                      {"measure_ratio", t.sel.constants.measure_ratio},
                      {"exp_ratio", t.sel.constants.exp_ratio},
                      {"original_ratio", t.original_ratio},
                      {"pass", t.pass},
                      {"failure", t.failure}});
  }
  summary["trials"] = trials;
  write_text_file(dir / "summary.json", summary.dump(2) + "\n");

  std::ostringstream csv;
  csv << "trial,kind,boxes,p1_dropped,selected,rejected,m_original,m_input,m_selected,"
         "m_rejected,measure_ratio,exp_ratio,original_ratio,product_checked,"
         "product_violations,inclusion_cells,inclusion_violations,pass\n";
  for (const TrialOutcome& t : bundle.trials) {
    csv << t.trial << "," << to_string(t.kind) << "," << t.original.boxes.size() << ","
        << t.prep.dropped.size() << "," << t.sel.selected.size() << "," << t.sel.rejected.size()
        << "," << t.union_original << "," << t.sel.union_all << "," << t.sel.union_selected << ","
        << t.union_rejected << "," << fmt_double(t.sel.constants.measure_ratio) << ","
        << fmt_double(t.sel.constants.exp_ratio) << "," << fmt_double(t.original_ratio) << ","
        << t.product_checked << "," << t.product_violations << "," << t.incl.cells_checked << ","
        << t.incl.violation_count << "," << (t.pass ? 1 : 0) << "\n";
  }
  write_text_file(dir / "trials.csv", csv.str());

  for (const TrialOutcome& t : bundle.trials) {
    write_text_file(dir / ("depth_hist_" + std::to_string(t.trial) + ".csv"),
                    histogram_to_csv(t.exp_hist));
    if (!t.failure.empty()) {
      write_text_file(dir / ("failed_trial_" + std::to_string(t.trial) + "_family.json"),
                      family_to_json(t.original));
    }
  }

  if (!bundle.trials.empty()) {
    const TrialOutcome& t0 = bundle.trials.front();
    std::string section;
    if (!t0.sel.rejected.empty()) {
      // Section through the first rejected candidate with its class split.
      const std::size_t ri = t0.sel.rejected.front();
      const Box3& r = t0.prep.family.boxes[ri];
      std::vector<Box3> prior;
      for (std::size_t i : t0.sel.selected) {
        if (i < ri) prior.push_back(t0.prep.family.boxes[i]);
      }
      const ClassSplit split = split_classes(r, prior);
      std::vector<Box3> dil1, dil2;
      for (std::size_t j : split.class1) dil1.push_back(dilate(prior[j], t0.sel.params.dilation));
      for (std::size_t j : split.class2) dil2.push_back(dilate(prior[j], t0.sel.params.dilation));
      const Scalar zmid = r.z.lo + r.z.length() / 2;
      section = section_pair_csv(r, dil1, dil2, zmid);
    } else if (!t0.original.boxes.empty()) {
      const Box3 hull = bounding_box(t0.original.boxes);
      section = section_depth_csv(t0.original.boxes, hull.z.lo + hull.z.length() / 2);
    }
    if (!section.empty()) write_text_file(dir / "section_0.csv", section);
  }
}

std::string section_depth_csv(std::span<const Box3> boxes, Scalar z) {
  std::array<std::span<const Box3>, 1> lists{boxes};
  const PlaneCells plane = PlaneCells::build(lists, z);
  std::ostringstream out;
  out << "x_lo,x_hi,y_lo,y_hi,depth\n";
  if (plane.depth.empty()) return out.str();
  const std::size_t nx = plane.xs.size() - 1;
  for (std::size_t j = 0; j + 1 < plane.ys.size(); ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      out << plane.xs[i] << "," << plane.xs[i + 1] << "," << plane.ys[j] << ","
          << plane.ys[j + 1] << "," << plane.depth[0][j * nx + i] << "\n";
    }
  }
  return out.str();
}

std::string section_pair_csv(const Box3& region, std::span<const Box3> class1,
                             std::span<const Box3> class2, Scalar z) {
  // Clip both classes to the region so the cells tile the candidate exactly.
  std::vector<Box3> c1, c2;
  for (const Box3& b : class1) {
    if (auto c = intersect(b, region)) c1.push_back(*c);
  }
  for (const Box3& b : class2) {
    if (auto c = intersect(b, region)) c2.push_back(*c);
  }
  std::array<Box3, 1> reg{region};
  std::array<std::span<const Box3>, 3> lists{std::span<const Box3>(reg),
                                             std::span<const Box3>(c1),
                                             std::span<const Box3>(c2)};
  const PlaneCells plane = PlaneCells::build(lists, z);
  std::ostringstream out;
  out << "x_lo,x_hi,y_lo,y_hi,r,s\n";
  if (plane.depth.size() < 3) return out.str();
  const std::size_t nx = plane.xs.size() - 1;
  for (std::size_t j = 0; j + 1 < plane.ys.size(); ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      if (plane.depth[0][j * nx + i] == 0) continue; // outside the candidate
      out << plane.xs[i] << "," << plane.xs[i + 1] << "," << plane.ys[j] << ","
          << plane.ys[j + 1] << "," << plane.depth[1][j * nx + i] << ","
          << plane.depth[2][j * nx + i] << "\n";
    }
  }
  return out.str();
}

} // namespace zyg
