// zyglab: generate box families, run the exponential selection sieve, and
// verify the covering inequalities it guarantees.
//
// Exit codes: 0 all checks pass, 1 a check failed (or the run hit the
// declared overflow error), 2 usage or I/O error.

#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "zyg/experiment.hpp"
#include "zyg/family_io.hpp"
#include "zyg/maximal.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    zyg::write_text_file(out_path, text);
  }
}

struct ParamFlags {
  double threshold = 3.0;
  int dilation = 3;
  double c = 1.0;

  zyg::SelectionParams params() const { return {threshold, dilation, c}; }
  void attach(CLI::App* cmd) {
    cmd->add_option("--threshold", threshold, "acceptance bound on the exponential average");
    cmd->add_option("--dilation", dilation, "odd dilation factor for prior selections");
    cmd->add_option("--c", c, "exponent scale in e^{c * depth}");
  }
};

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"computational laboratory for the exponential covering of box families"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "emit a random family as JSON");
  std::uint64_t seed = 42;
  int n = 100;
  zyg::Scalar range = 256;
  std::string kind = "zygmund";
  std::string gen_out;
  zyg::ProfileSpec profile;
  gen->add_option("--seed", seed, "RNG seed");
  gen->add_option("--n", n, "number of boxes");
  gen->add_option("--range", range, "coordinate range for box positions");
  gen->add_option("--kind", kind, "zygmund | adversarial");
  gen->add_option("--x-samples", profile.x_samples, "profile sample count, first side");
  gen->add_option("--y-samples", profile.y_samples, "profile sample count, second side");
  gen->add_option("--max-side-step", profile.max_side_step, "max increment between sample lengths");
  gen->add_option("--max-increment", profile.max_increment, "max increment of the profile table");
  gen->add_option("--out", gen_out, "output file (default stdout)");

  // select
  auto* sel = app.add_subcommand("select", "order, sparseness-filter and run the sieve");
  std::string sel_family, sel_out;
  ParamFlags sel_params;
  sel->add_option("family", sel_family, "family JSON file")->required();
  sel_params.attach(sel);
  sel->add_option("--out", sel_out, "output file (default stdout)");

  // verify
  auto* ver = app.add_subcommand("verify", "re-derive and check every selection inequality");
  std::string ver_family, ver_result, ver_out;
  ver->add_option("family", ver_family, "family JSON file")->required();
  ver->add_option("result", ver_result, "selection result JSON file")->required();
  ver->add_option("--out", ver_out, "output file (default stdout)");

  // maximal
  auto* mx = app.add_subcommand("maximal", "level set and weak-type report for a field");
  std::string mx_field, mx_out;
  int mx_axis = 1;
  double mx_lambda = 1.0;
  double mx_constant = 5.0;
  mx->add_option("field", mx_field, "field JSON file")->required();
  mx->add_option("--axis", mx_axis, "direction 1, 2 or 3");
  mx->add_option("--lambda", mx_lambda, "superlevel threshold")->required();
  mx->add_option("--constant", mx_constant, "weak-type constant");
  mx->add_option("--out", mx_out, "output file (default stdout)");

  // experiment
  auto* exp = app.add_subcommand("experiment", "run a config file and write the report bundle");
  std::string exp_config, exp_out;
  int exp_trials = -1;
  exp->add_option("config", exp_config, "experiment config JSON file")->required();
  exp->add_option("--trials", exp_trials, "override the config trial count");
  exp->add_option("--out", exp_out, "output directory")->required();

  // section
  auto* sec = app.add_subcommand("section", "planar section of a family as CSV");
  std::string sec_family, sec_out;
  zyg::Scalar sec_z = 0;
  sec->add_option("family", sec_family, "family JSON file")->required();
  sec->add_option("--z", sec_z, "plane height (slab starting at z)")->required();
  sec->add_option("--out", sec_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    if (*gen) {
      zyg::ExperimentConfig cfg;
      cfg.seed = seed;
      cfg.n_boxes = n;
      cfg.coordinate_range = range;
      cfg.profile = profile;
      cfg.kind = zyg::family_kind_from_string(kind);
      const zyg::BoxFamily family = cfg.kind == zyg::FamilyKind::Zygmund
                                        ? zyg::generate_zygmund_family(cfg)
                                        : zyg::generate_adversarial_family(cfg);
      emit(zyg::family_to_json(family), gen_out);
      return 0;
    }

    if (*sel) {
      const zyg::BoxFamily family = zyg::load_family(sel_family);
      const zyg::PreparedFamily prep = zyg::prepare_family(family);
      const zyg::SelectionResult result = zyg::cordoba_select(prep.family, sel_params.params());
      emit(zyg::selection_to_json(result, prep.original), sel_out);
      return 0;
    }

    if (*ver) {
      const zyg::BoxFamily family = zyg::load_family(ver_family);
      const zyg::PreparedFamily prep = zyg::prepare_family(family);
      const zyg::SelectionResult result =
          zyg::selection_from_json(zyg::read_text_file(ver_result), prep.original);
      const zyg::VerificationReport verification = zyg::verify_selection(result, prep.family);
      const zyg::InclusionReport inclusion = zyg::rejected_inclusion_check(result, prep.family);

      std::size_t product_checked = 0, product_violations = 0, unclassified = 0;
      std::vector<zyg::Box3> prior;
      for (const zyg::CandidateTrace& t : result.trace) {
        const zyg::Box3& box = prep.family.boxes[t.index];
        if (t.accepted) {
          prior.push_back(box);
          continue;
        }
        const zyg::ProductBoundReport pb = zyg::product_bound_check(
            box, prior, result.params.dilation, result.params.c, result.params.threshold);
        ++product_checked;
        product_violations += pb.violations.size();
        unclassified += pb.split.unclassified.size();
      }

      const bool pass = verification.pass() && inclusion.pass() && product_violations == 0;
      json report;
      report["pass"] = pass;
      report["verification"] = json::parse(zyg::verification_to_json(verification));
      report["inclusion"] = json::parse(zyg::inclusion_to_json(inclusion));
      report["product_bound"] = {{"rejected_checked", product_checked},
                                 {"violations", product_violations},
                                 {"unclassified_priors", unclassified}};
      report["params"] = {{"threshold", result.params.threshold},
                          {"dilation", result.params.dilation},
                          {"c", result.params.c}};
      if (result.params.dilation != 3) report["non_canonical_dilation"] = true;
      emit(report.dump(2) + "\n", ver_out);
      return pass ? 0 : 1;
    }

    if (*mx) {
      const zyg::ScalarField3 field = zyg::load_field(mx_field);
      const zyg::WeakTypeReport weak = zyg::weak_type_check(field, mx_axis, mx_lambda, mx_constant);
      json report = json::parse(zyg::weak_type_to_json(weak));
      report["superlevel_measure"] = zyg::maximal_superlevel_measure(field, mx_axis, mx_lambda);
      emit(report.dump(2) + "\n", mx_out);
      return weak.pass ? 0 : 1;
    }

    if (*exp) {
      zyg::ExperimentConfig cfg = zyg::load_config(exp_config);
      if (exp_trials >= 0) cfg.trial_count = exp_trials;
      const zyg::ExperimentBundle bundle = zyg::run_experiment(cfg);
      zyg::emit_report(bundle, exp_out);
      std::cout << (bundle.all_pass ? "all checks passed" : "CHECK FAILURES") << " ("
                << bundle.trials.size() << " trials, reports in " << exp_out << ")\n";
      return bundle.all_pass ? 0 : 1;
    }

    if (*sec) {
      const zyg::BoxFamily family = zyg::load_family(sec_family);
      emit(zyg::section_depth_csv(family.boxes, sec_z), sec_out);
      return 0;
    }
  } catch (const zyg::ExpOverflowError& e) {
    std::cerr << "overflow: " << e.what() << "\n";
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
