#include "zyg/family_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace zyg {

using nlohmann::json;

namespace {

json box_to_json(const Box3& b) {
  return json{{"x", {b.x.lo, b.x.hi}}, {"y", {b.y.lo, b.y.hi}}, {"z", {b.z.lo, b.z.hi}}};
}

Box3 box_from_json(const json& j) {
  auto iv = [&](const char* key) {
    const json& a = j.at(key);
    if (!a.is_array() || a.size() != 2) {
      throw std::invalid_argument(std::string("box: '") + key + "' must be [lo, hi]");
    }
    return Interval(a[0].get<Scalar>(), a[1].get<Scalar>());
  };
  return Box3(iv("x"), iv("y"), iv("z"));
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

} // namespace

std::string family_to_json(const BoxFamily& f) {
  json j;
  if (f.profile) {
    json table = json::array();
    for (const ProfileSample& s : f.profile->samples()) {
      table.push_back({{"x", s.x}, {"y", s.y}, {"phi", s.phi}});
    }
    j["profile"] = table;
  } else {
    j["profile"] = nullptr;
  }
  json boxes = json::array();
  for (const Box3& b : f.boxes) boxes.push_back(box_to_json(b));
  j["boxes"] = boxes;
  return dump(j);
}

BoxFamily family_from_json(const std::string& text) {
  const json j = json::parse(text);
  BoxFamily f;
  if (j.contains("profile") && !j.at("profile").is_null()) {
    std::vector<ProfileSample> samples;
    for (const json& s : j.at("profile")) {
      samples.push_back({s.at("x").get<Scalar>(), s.at("y").get<Scalar>(),
                         s.at("phi").get<Scalar>()});
    }
    f.profile = ZygmundProfile(std::move(samples));
  }
  for (const json& b : j.at("boxes")) f.boxes.push_back(box_from_json(b));
  check_family_bounds(f);
  return f;
}

BoxFamily load_family(const std::filesystem::path& path) {
  return family_from_json(read_text_file(path));
}

void save_family(const BoxFamily& f, const std::filesystem::path& path) {
  write_text_file(path, family_to_json(f));
}

std::string selection_to_json(const SelectionResult& r, std::span<const std::size_t> index_map) {
  auto mapped = [&](std::size_t i) -> std::size_t {
    if (index_map.empty()) return i;
    if (i >= index_map.size()) throw std::invalid_argument("selection_to_json: index map too short");
    return index_map[i];
  };
  json j;
  j["selected"] = json::array();
  for (std::size_t i : r.selected) j["selected"].push_back(mapped(i));
  j["rejected"] = json::array();
  for (std::size_t i : r.rejected) j["rejected"].push_back(mapped(i));
  json trace = json::array();
  for (const CandidateTrace& t : r.trace) {
    trace.push_back({{"index", mapped(t.index)},
                     {"avg", t.avg},
                     {"accepted", t.accepted},
                     {"Ik", t.running_integral}});
  }
  j["trace"] = trace;
  j["constants"] = {{"measure_ratio", r.constants.measure_ratio},
                    {"exp_ratio", r.constants.exp_ratio},
                    {"bound_6e", r.constants.bound_6e}};
  j["union_all"] = r.union_all;
  j["union_selected"] = r.union_selected;
  j["params"] = {{"threshold", r.params.threshold},
                 {"dilation", r.params.dilation},
                 {"c", r.params.c}};
  if (r.params.dilation != 3) j["non_canonical_dilation"] = true;
  return dump(j);
}

SelectionResult selection_from_json(const std::string& text,
                                    std::span<const std::size_t> index_map) {
  // Invert the map: enlistment index -> sieve position.
  auto unmap = [&](std::size_t enlisted) -> std::size_t {
    if (index_map.empty()) return enlisted;
    for (std::size_t pos = 0; pos < index_map.size(); ++pos) {
      if (index_map[pos] == enlisted) return pos;
    }
    throw std::invalid_argument("selection result refers to index " + std::to_string(enlisted) +
                                " which is not a sieve candidate of this family");
  };
  const json j = json::parse(text);
  SelectionResult r;
  for (const json& v : j.at("selected")) r.selected.push_back(unmap(v.get<std::size_t>()));
  for (const json& v : j.at("rejected")) r.rejected.push_back(unmap(v.get<std::size_t>()));
  for (const json& t : j.at("trace")) {
    CandidateTrace ct;
    ct.index = unmap(t.at("index").get<std::size_t>());
    ct.avg = t.at("avg").get<double>();
    ct.accepted = t.at("accepted").get<bool>();
    ct.running_integral = t.at("Ik").get<double>();
    r.trace.push_back(std::move(ct));
  }
  const json& c = j.at("constants");
  r.constants.measure_ratio = c.at("measure_ratio").get<double>();
  r.constants.exp_ratio = c.at("exp_ratio").get<double>();
  r.constants.bound_6e = c.at("bound_6e").get<double>();
  if (j.contains("union_all")) r.union_all = j.at("union_all").get<Measure>();
  if (j.contains("union_selected")) r.union_selected = j.at("union_selected").get<Measure>();
  if (j.contains("params")) {
    const json& p = j.at("params");
    r.params.threshold = p.at("threshold").get<double>();
    r.params.dilation = p.at("dilation").get<int>();
    r.params.c = p.at("c").get<double>();
  }
  return r;
}

PreparedFamily prepare_family(const BoxFamily& original) {
  PreparedFamily prep;
  const std::vector<std::size_t> order = third_side_order(original);
  BoxFamily ordered;
  ordered.profile = original.profile;
  ordered.boxes.reserve(original.boxes.size());
  for (std::size_t i : order) ordered.boxes.push_back(original.boxes[i]);
  P1Result p1 = p1_filter(ordered);
  prep.family = std::move(p1.kept);
  prep.original.reserve(p1.kept_indices.size());
  for (std::size_t pos : p1.kept_indices) prep.original.push_back(order[pos]);
  for (std::size_t pos : p1.dropped) prep.dropped.push_back(order[pos]);
  return prep;
}

ExperimentConfig config_from_json(const std::string& text) {
  const json j = json::parse(text);
  ExperimentConfig cfg;
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("n_boxes")) cfg.n_boxes = j.at("n_boxes").get<int>();
  if (j.contains("coordinate_range")) cfg.coordinate_range = j.at("coordinate_range").get<Scalar>();
  if (j.contains("trial_count")) cfg.trial_count = j.at("trial_count").get<int>();
  if (j.contains("kind")) cfg.kind = family_kind_from_string(j.at("kind").get<std::string>());
  if (j.contains("profile")) {
    const json& p = j.at("profile");
    if (p.contains("x_samples")) cfg.profile.x_samples = p.at("x_samples").get<int>();
    if (p.contains("y_samples")) cfg.profile.y_samples = p.at("y_samples").get<int>();
    if (p.contains("max_side_step")) cfg.profile.max_side_step = p.at("max_side_step").get<Scalar>();
    if (p.contains("max_increment")) cfg.profile.max_increment = p.at("max_increment").get<Scalar>();
  }
  if (j.contains("parameters")) {
    const json& p = j.at("parameters");
    if (p.contains("threshold")) cfg.params.threshold = p.at("threshold").get<double>();
    if (p.contains("dilation")) cfg.params.dilation = p.at("dilation").get<int>();
    if (p.contains("c")) cfg.params.c = p.at("c").get<double>();
  }
  return cfg;
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["seed"] = cfg.seed;
  j["n_boxes"] = cfg.n_boxes;
  j["coordinate_range"] = cfg.coordinate_range;
  j["trial_count"] = cfg.trial_count;
  j["kind"] = to_string(cfg.kind);
  j["profile"] = {{"x_samples", cfg.profile.x_samples},
                  {"y_samples", cfg.profile.y_samples},
                  {"max_side_step", cfg.profile.max_side_step},
                  {"max_increment", cfg.profile.max_increment}};
  j["parameters"] = {{"threshold", cfg.params.threshold},
                     {"dilation", cfg.params.dilation},
                     {"c", cfg.params.c}};
  return dump(j);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  return config_from_json(read_text_file(path));
}

ScalarField3 field_from_json(const std::string& text) {
  const json j = json::parse(text);
  Grid3 grid;
  grid.xs = j.at("xs").get<std::vector<Scalar>>();
  grid.ys = j.at("ys").get<std::vector<Scalar>>();
  grid.zs = j.at("zs").get<std::vector<Scalar>>();
  for (int a = 0; a < 3; ++a) {
    const std::vector<Scalar>& bp = grid.axis(a);
    if (bp.size() < 2 || !std::is_sorted(bp.begin(), bp.end()) ||
        std::adjacent_find(bp.begin(), bp.end()) != bp.end()) {
      throw std::invalid_argument("field: breakpoints must be strictly increasing, length >= 2");
    }
  }
  ScalarField3 f;
  f.grid = std::move(grid);
  f.value = j.at("values").get<std::vector<double>>();
  if (f.value.size() != f.grid.cells()) {
    throw std::invalid_argument("field: expected one value per grid cell");
  }
  for (double v : f.value) {
    if (!(v >= 0)) throw std::invalid_argument("field: values must be nonnegative");
  }
  return f;
}

ScalarField3 load_field(const std::filesystem::path& path) {
  return field_from_json(read_text_file(path));
}

std::string histogram_to_csv(const DepthHistogram& h) {
  std::ostringstream out;
  out << "k,measure\n";
  for (const auto& [d, m] : h.entries) out << d << "," << m << "\n";
  return out.str();
}

std::string joint_histogram_to_csv(const JointDepthHistogram& h) {
  std::ostringstream out;
  out << "r,s,measure\n";
  for (const JointDepthHistogram::Entry& e : h.entries) {
    out << e.r << "," << e.s << "," << e.measure << "\n";
  }
  return out.str();
}

std::string verification_to_json(const VerificationReport& report) {
  json checks = json::array();
  for (const VerificationCheck& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"pass", c.pass},
                      {"lhs", c.lhs},
                      {"rhs", c.rhs},
                      {"detail", c.detail}});
  }
  json j;
  j["pass"] = report.pass();
  j["checks"] = checks;
  j["candidates_replayed"] = report.candidates_replayed;
  j["acceptance_steps"] = report.acceptance_steps;
  j["replay_mismatches"] = report.replay_mismatches;
  return dump(j);
}

std::string inclusion_to_json(const InclusionReport& report) {
  json j;
  j["pass"] = report.pass();
  j["lambda"] = report.lambda;
  j["cells_checked"] = report.cells_checked;
  j["violation_count"] = report.violation_count;
  j["witness_axis1"] = report.witness_axis1;
  j["witness_axis2"] = report.witness_axis2;
  j["witness_both"] = report.witness_both;
  j["pointwise_violation_count"] = report.pointwise_violation_count;
  j["pointwise_violation_measure"] = report.pointwise_violation_measure;
  json cells = json::array();
  for (const Box3& b : report.violations) cells.push_back(box_to_json(b));
  j["violations"] = cells;
  return dump(j);
}

std::string weak_type_to_json(const WeakTypeReport& report) {
  json j;
  j["axis"] = report.axis;
  j["lambda"] = report.lambda;
  j["constant"] = report.constant;
  j["level_set_measure"] = report.level_set;
  j["integral"] = report.integral;
  j["bound"] = report.bound;
  j["pass"] = report.pass;
  return dump(j);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

} // namespace zyg
