#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "zyg/generate.hpp"
#include "zyg/geometry.hpp"
#include "zyg/maximal.hpp"
#include "zyg/selection.hpp"

namespace zyg {

// Family files:
//   {"profile": [{"x":int,"y":int,"phi":int}, ...] | null,
//    "boxes":   [{"x":[lo,hi],"y":[lo,hi],"z":[lo,hi]}, ...]}
// The order of "boxes" is significant: it is the enlistment order.
std::string family_to_json(const BoxFamily& f);
BoxFamily family_from_json(const std::string& text); // applies the load-time bounds guard
BoxFamily load_family(const std::filesystem::path& path);
void save_family(const BoxFamily& f, const std::filesystem::path& path);

// Selection results:
//   {"selected":[...], "rejected":[...],
//    "trace":[{"index":i,"avg":float,"accepted":bool,"Ik":float}, ...],
//    "constants":{"measure_ratio":float,"exp_ratio":float,"bound_6e":float},
//    "params":{...}}
// plus "non_canonical_dilation": true when the dilation is not 3.
// `index_map`, when nonempty, translates positions in the sieve input to the
// caller's enlistment indices (and back on parsing).
std::string selection_to_json(const SelectionResult& r,
                              std::span<const std::size_t> index_map = {});
SelectionResult selection_from_json(const std::string& text,
                                    std::span<const std::size_t> index_map = {});

// Order + sparseness filter; positions in `family` map back through
// `original`.
struct PreparedFamily {
  BoxFamily family;
  std::vector<std::size_t> original; // original index per prepared position
  std::vector<std::size_t> dropped;  // original indices dropped by the filter
};
PreparedFamily prepare_family(const BoxFamily& original);

ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::filesystem::path& path);

// Scalar fields for the maximal-operator CLI:
//   {"xs":[...], "ys":[...], "zs":[...], "values":[...]}  (x fastest)
ScalarField3 field_from_json(const std::string& text);
ScalarField3 load_field(const std::filesystem::path& path);

// Histogram export: rows "k,measure"; joint rows "r,s,measure". Measures are
// exact integers in lattice units cubed.
std::string histogram_to_csv(const DepthHistogram& h);
std::string joint_histogram_to_csv(const JointDepthHistogram& h);

std::string verification_to_json(const VerificationReport& report);
std::string inclusion_to_json(const InclusionReport& report);
std::string weak_type_to_json(const WeakTypeReport& report);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

} // namespace zyg
