#include "jdlg/io.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "jdlg/asymptotics.hpp"
#include "jdlg/numeric.hpp"
#include "jdlg/structure.hpp"

namespace jdlg {
namespace io {

using nlohmann::json;

//=========================================================================
// JSON helpers
//=========================================================================

namespace {

double finite_double(const json& j, const std::string& what) {
  if (!j.is_number())
    throw Error(ErrorKind::validation, what + " is not a number");
  double v = j.get<double>();
  if (!std::isfinite(v))
    throw Error(ErrorKind::validation, what + " is not finite");
  return v;
}

Complex parse_complex(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2)
    throw Error(ErrorKind::validation, what + " is not a [re, im] pair");
  return Complex(finite_double(j[0], what), finite_double(j[1], what));
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Mat parse_matrix(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty())
    throw Error(ErrorKind::validation, what + " is not a matrix");
  size_t rows = j.size();
  size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0)
    throw Error(ErrorKind::validation, what + " has an empty row");
  Mat m(static_cast<int>(rows), static_cast<int>(cols));
  for (size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw Error(ErrorKind::validation, what + " is not rectangular");
    for (size_t c = 0; c < cols; ++c)
      m(static_cast<int>(r), static_cast<int>(c)) =
          parse_complex(j[r][c], what + " entry");
  }
  return m;
}

json matrix_to_json(const Mat& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json element_to_json(const AlgebraElement& e) {
  json blocks = json::array();
  for (int b = 0; b < e.algebra().num_blocks(); ++b)
    blocks.push_back(matrix_to_json(e.block(b)));
  return blocks;
}

corpus::Expected parse_expected(const json& j) {
  corpus::Expected e;
  if (!j.contains("peripheral") || !j["peripheral"].is_array())
    throw Error(ErrorKind::validation, "expected block needs a peripheral array");
  for (const json& v : j["peripheral"])
    e.peripheral.push_back(parse_complex(v, "expected peripheral eigenvalue"));
  if (j.contains("h")) e.order = j["h"].get<int>();
  e.dim_reversible = j.value("dim_reversible", 0);
  e.ergodic = j.value("ergodic", false);
  e.stable_radius = j.contains("stable_radius")
                        ? finite_double(j["stable_radius"], "stable_radius")
                        : 0.0;
  return e;
}

json expected_to_json(const corpus::Expected& e) {
  json j;
  json vals = json::array();
  for (Complex v : e.peripheral) vals.push_back(complex_to_json(v));
  j["peripheral"] = std::move(vals);
  if (e.order) j["h"] = *e.order;
  j["dim_reversible"] = e.dim_reversible;
  j["ergodic"] = e.ergodic;
  j["stable_radius"] = e.stable_radius;
  return j;
}

}  // namespace

//=========================================================================
// Channel spec files
//=========================================================================

ChannelSpec parse_channel_spec(const json& j) {
  if (!j.is_object())
    throw Error(ErrorKind::validation, "spec is not a JSON object");
  if (j.value("schema", 0) != 1)
    throw Error(ErrorKind::validation, "unsupported or missing schema version");
  if (!j.contains("algebra") || !j["algebra"].contains("block_dims"))
    throw Error(ErrorKind::validation, "spec needs algebra.block_dims");

  std::vector<int> dims;
  for (const json& d : j["algebra"]["block_dims"]) {
    if (!d.is_number_integer() || d.get<int>() < 1)
      throw Error(ErrorKind::validation, "block_dims must be positive integers");
    dims.push_back(d.get<int>());
  }
  BlockAlgebra algebra(dims);

  if (!j.contains("map") || !j["map"].is_object())
    throw Error(ErrorKind::validation, "spec needs a map object");
  const json& map = j["map"];
  int present = static_cast<int>(map.contains("kraus")) +
                static_cast<int>(map.contains("choi")) +
                static_cast<int>(map.contains("superoperator"));
  if (present != 1)
    throw Error(ErrorKind::validation,
                "map needs exactly one of kraus, choi, superoperator");

  ChannelSpec spec{identity_channel(algebra), {}, Tolerances{}, std::nullopt,
                   std::nullopt, "", ""};
  spec.name = j.value("name", "");

  if (map.contains("kraus")) {
    std::vector<Mat> kraus;
    for (const json& k : map["kraus"])
      kraus.push_back(parse_matrix(k, "Kraus operator"));
    spec.channel = from_kraus(algebra, std::move(kraus), spec.name);
  } else if (map.contains("choi")) {
    spec.channel = from_choi(algebra, parse_matrix(map["choi"], "Choi matrix"),
                             spec.name);
  } else {
    Mat s = parse_matrix(map["superoperator"], "superoperator");
    spec.channel = channel_from_superop(algebra, std::move(s), spec.name);
  }

  if (j.contains("states")) {
    for (const json& st : j["states"]) {
      if (!st.contains("blocks"))
        throw Error(ErrorKind::validation, "state needs a blocks array");
      std::vector<Mat> rho;
      for (const json& b : st["blocks"])
        rho.push_back(parse_matrix(b, "state block"));
      spec.states.emplace_back(algebra, std::move(rho));
    }
  }

  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    if (t.contains("peripheral"))
      spec.tolerances.peripheral = finite_double(t["peripheral"], "tolerance");
    if (t.contains("hypothesis"))
      spec.tolerances.hypothesis = finite_double(t["hypothesis"], "tolerance");
    if (t.contains("faithful"))
      spec.tolerances.faithful = finite_double(t["faithful"], "tolerance");
  }

  if (j.contains("expected")) spec.expected = parse_expected(j["expected"]);
  if (j.contains("seed")) spec.seed = j["seed"].get<std::uint64_t>();
  spec.provenance = j.value("provenance", "");
  return spec;
}

ChannelSpec load_channel_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorKind::validation, "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::validation, std::string("malformed JSON: ") + e.what());
  }
  return parse_channel_spec(j);
}

json corpus_entry_to_spec_json(const corpus::CorpusEntry& entry) {
  json j;
  j["schema"] = 1;
  j["name"] = entry.provenance;
  j["provenance"] = entry.provenance;
  j["seed"] = entry.seed;
  json dims = json::array();
  for (int d : entry.channel.algebra.block_dims) dims.push_back(d);
  j["algebra"]["block_dims"] = std::move(dims);
  if (entry.channel.kraus) {
    json kraus = json::array();
    for (const Mat& k : *entry.channel.kraus) kraus.push_back(matrix_to_json(k));
    j["map"]["kraus"] = std::move(kraus);
  } else {
    j["map"]["superoperator"] = matrix_to_json(entry.channel.superop);
  }
  json blocks = json::array();
  for (int b = 0; b < entry.channel.algebra.num_blocks(); ++b)
    blocks.push_back(matrix_to_json(entry.state.rho(b)));
  j["states"] = json::array({json{{"blocks", std::move(blocks)}}});
  j["expected"] = expected_to_json(entry.expected);
  return j;
}

//=========================================================================
// Analysis pipeline
//=========================================================================

namespace {

json hypothesis_to_json(const HypothesisDiagnostic& hyp) {
  json j;
  j["pass"] = hyp.pass;
  j["norms"] = hyp.norms;
  j["warnings"] = hyp.warnings;
  if (!hyp.failure.empty()) j["failure"] = hyp.failure;
  return j;
}

json spectrum_to_json(const SpectralData& sd) {
  json j;
  json vals = json::array();
  for (Complex v : sd.eigenvalues) vals.push_back(complex_to_json(v));
  j["eigenvalues"] = std::move(vals);
  j["peripheral_indices"] = sd.peripheral;
  j["stable_radius"] = sd.stable_radius;
  j["defective_peripheral"] = sd.defective_peripheral;
  j["warnings"] = sd.warnings;
  return j;
}

json split_to_json(const JdlgSplit& split, double oracle_distance,
                   bool oracle_checked) {
  json j;
  j["dim_reversible"] = split.dim_reversible();
  j["dim_stable"] = split.dim_stable();
  j["method"] = split.method;
  json rb = json::array(), sb = json::array();
  for (const AlgebraElement& r : split.reversible_basis)
    rb.push_back(element_to_json(r));
  for (const AlgebraElement& s : split.stable_basis)
    sb.push_back(element_to_json(s));
  j["reversible_basis"] = std::move(rb);
  j["stable_basis"] = std::move(sb);
  j["residuals"] = {{"idempotency", split.idempotency_residual},
                    {"phi_symmetry", split.phi_symmetry_residual},
                    {"symmetrization_move", split.symmetrization_move},
                    {"commutation", split.commutation_residual},
                    {"restricted_condition", split.restricted_condition},
                    {"basis_orthonormality", split.basis_orthonormality}};
  if (oracle_checked) j["oracle_distance"] = oracle_distance;
  return j;
}

json structure_to_json(const StructureReport& report) {
  json j;
  j["ergodic"] = report.ergodic;
  j["partial"] = report.partial;
  j["fixed_space_dim"] = report.fixed_space_dim;
  j["completely_positive"] = report.completely_positive;
  j["unital"] = report.unital;
  j["min_choi_eigenvalue"] = report.min_choi_eigenvalue;
  j["invariance_residual"] = report.invariance_residual;
  json group;
  json vals = json::array();
  for (Complex v : report.group.eigenvalues) vals.push_back(complex_to_json(v));
  group["eigenvalues"] = std::move(vals);
  if (report.group.order) group["order"] = *report.group.order;
  group["subgroup_closed"] = report.group.subgroup_closed;
  group["max_closure_defect"] = report.group.max_closure_defect;
  j["peripheral_group"] = std::move(group);
  j["peripheral_simple"] = report.peripheral_simple;
  j["max_geometric_multiplicity"] = report.max_geometric_multiplicity;
  json rotations = json::array();
  for (const auto& [alpha, defect] : report.rotation_defects)
    rotations.push_back({{"alpha", complex_to_json(alpha)}, {"defect", defect}});
  j["rotation_defects"] = std::move(rotations);
  j["max_rotation_defect"] = report.max_rotation_defect;
  j["subalgebra"] = report.subalgebra;
  j["subalgebra_residual"] = report.subalgebra_residual;
  j["conditional_expectation_residual"] = report.conditional_expectation_residual;
  j["phi_composition_residual"] = report.expectation.phi_composition_residual;
  j["trace_residual"] = report.trace_residual;
  j["orthogonality_residual"] = report.orthogonality_residual;
  j["automorphism_residual"] = report.automorphism_residual;
  j["star_residual"] = report.star_residual;
  j["eigenvector_relation_residual"] = report.eigenvector_relation_residual;
  json evs = json::array();
  for (const UnitaryEigenvector& ev : report.eigenvectors) {
    json e;
    e["eigenvalue"] = complex_to_json(ev.eigenvalue);
    e["element"] = element_to_json(ev.u);
    e["unitarity_residual"] = ev.unitarity_residual;
    e["eigen_residual"] = ev.eigen_residual;
    evs.push_back(std::move(e));
  }
  j["unitary_eigenvectors"] = std::move(evs);
  return j;
}

json convergence_to_json(const ConvergenceReport& report) {
  json j;
  j["difference_norms"] = report.difference_norms;
  j["fitted_rate"] = report.fitted_rate;
  j["stable_radius"] = report.stable_radius;
  json probes = json::array();
  for (const ConvergenceProbe& p : report.probes) {
    json pj;
    pj["kind"] = p.kind;
    pj["cesaro"] = p.cesaro;
    pj["loglog_slope"] = p.loglog_slope;
    probes.push_back(std::move(pj));
  }
  j["probes"] = std::move(probes);
  return j;
}

void assert_finite_numbers(const json& j, const std::string& where) {
  if (j.is_number_float() && !std::isfinite(j.get<double>()))
    throw Error(ErrorKind::numeric, "non-finite value in report at " + where);
  if (j.is_object())
    for (auto it = j.begin(); it != j.end(); ++it)
      assert_finite_numbers(it.value(), where + "/" + it.key());
  if (j.is_array()) {
    int k = 0;
    for (const json& v : j) assert_finite_numbers(v, where + "/" + std::to_string(k++));
  }
}

}  // namespace

AnalysisOutcome run_analysis(const ChannelSpec& spec, const AnalysisOptions& opts) {
  AnalysisOutcome outcome;
  json& report = outcome.report;
  report["schema"] = 1;
  report["tool"] = kToolVersion;
  if (!spec.name.empty()) report["name"] = spec.name;
  Tolerances tol = opts.effective(spec.tolerances);
  report["tolerances"] = {{"peripheral", tol.peripheral},
                          {"hypothesis", tol.hypothesis},
                          {"faithful", tol.faithful}};
  json dims = json::array();
  for (int d : spec.channel.algebra.block_dims) dims.push_back(d);
  report["algebra"]["block_dims"] = std::move(dims);

  const ChannelMap& t = spec.channel;

  // states: provided, or the invariant state of the preadjoint; when no
  // invariant state exists the hypothesis is still diagnosed against the
  // maximally mixed state
  StateFamily family;
  if (!spec.states.empty()) {
    family.states = spec.states;
    report["state_source"] = "provided";
  } else {
    try {
      InvariantStateResult inv = find_invariant_state(t);
      family.states.push_back(inv.state);
      report["state_source"] = "computed";
      report["invariant_state"] = {{"faithful", inv.faithful},
                                   {"fixed_space_dim", inv.fixed_space_dim},
                                   {"residual", inv.residual}};
    } catch (const Error& e) {
      family.states.push_back(NormalState::maximally_mixed(t.algebra));
      report["state_source"] = "fallback_maximally_mixed";
      report["invariant_state"] = {{"error", e.what()}};
    }
  }

  HypothesisDiagnostic hyp = verify_hypothesis(t, family, tol.hypothesis);
  report["hypothesis"] = hypothesis_to_json(hyp);
  if (!hyp.pass) {
    outcome.exit_code = kExitHypothesis;
    outcome.message = "hypothesis FAIL: " + hyp.failure;
    return outcome;
  }

  NormalState phi = family.states.size() == 1 ? family.states.front()
                                              : family.mixture();
  if (!phi.faithful(tol.faithful)) {
    outcome.exit_code = kExitHypothesis;
    outcome.message =
        "the state family is not jointly faithful; the splitting geometry "
        "is undefined";
    report["hypothesis"]["failure"] = outcome.message;
    return outcome;
  }

  SpectralData sd = eigendecompose(t, tol.peripheral);
  report["spectrum"] = spectrum_to_json(sd);

  JdlgSplit split = jdlg_split(t, phi, tol.peripheral, tol.faithful);

  // the averaging oracle targets unimodular eigenprojections; skip the
  // validation when a widened band admits strictly contracting eigenvalues
  bool band_unimodular = true;
  for (int k : sd.peripheral)
    if (std::abs(sd.eigenvalues[static_cast<size_t>(k)]) < 1.0 - 1e-6)
      band_unimodular = false;
  bool oracle_checked =
      opts.validate_oracle && opts.oracle_iters > 0 && band_unimodular;
  double oracle_distance = 0;
  if (oracle_checked) {
    std::vector<Complex> reps;
    for (int k : sd.peripheral) {
      Complex v = sd.eigenvalues[static_cast<size_t>(k)];
      v /= std::abs(v);
      bool seen = false;
      for (Complex r : reps)
        if (std::abs(r - v) <= 1e-8) seen = true;
      if (!seen) reps.push_back(v);
    }
    Mat oracle = peripheral_projection_oracle(t, reps, opts.oracle_iters);
    oracle_distance = (split.projection - oracle).norm();
    double budget = 1e-3 * std::max(1.0, 1e4 / opts.oracle_iters) + 1e-9;
    if (oracle_distance > budget)
      throw Error(ErrorKind::numeric,
                  "projection disagrees with the averaging oracle: " +
                      std::to_string(oracle_distance));
  }

  // structure report; a non-W*-dynamical input is reported, not fatal
  std::optional<StructureReport> structure;
  try {
    structure = perron_frobenius_report(t, phi, tol.peripheral,
                                        opts.seed);
    report["structure"] = structure_to_json(*structure);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::validation) throw;
    report["structure"] = {{"refused", e.what()}};
  }

  if (structure && structure->ergodic && structure->group.order) {
    split.group_order = structure->group.order;
    report["h"] = *structure->group.order;
  }
  report["split"] = split_to_json(split, oracle_distance, oracle_checked);

  ChannelMap periodic = periodic_part(t, split);
  ConvergenceReport conv =
      convergence_report(t, periodic, phi, split, opts.n_max, opts.probes,
                         opts.seed);
  report["convergence"] = convergence_to_json(conv);

  outcome.peripheral.clear();
  for (int k : sd.peripheral)
    outcome.peripheral.push_back(sd.eigenvalues[static_cast<size_t>(k)]);
  outcome.order = split.group_order;
  outcome.dim_reversible = split.dim_reversible();
  outcome.ergodic = structure ? structure->ergodic : false;
  outcome.stable_radius = sd.stable_radius;

  assert_finite_numbers(report, "");
  return outcome;
}

//=========================================================================
// Text rendering (human-oriented, non-contractual)
//=========================================================================

std::string report_to_text(const json& report) {
  std::ostringstream os;
  os << report.value("tool", "") << "\n";
  if (report.contains("name")) os << "channel: " << report["name"].get<std::string>() << "\n";
  if (report.contains("hypothesis")) {
    os << "hypothesis: " << (report["hypothesis"]["pass"].get<bool>() ? "PASS" : "FAIL");
    os << "  norms:";
    for (const json& n : report["hypothesis"]["norms"]) os << " " << n.get<double>();
    os << "\n";
  }
  if (report.contains("spectrum")) {
    os << "eigenvalues:";
    for (const json& v : report["spectrum"]["eigenvalues"])
      os << " (" << v[0].get<double>() << (v[1].get<double>() < 0 ? "" : "+")
         << v[1].get<double>() << "i)";
    os << "\n";
    os << "stable radius: " << report["spectrum"]["stable_radius"].get<double>() << "\n";
  }
  if (report.contains("split")) {
    os << "dim A_r: " << report["split"]["dim_reversible"].get<int>()
       << "  dim A_s: " << report["split"]["dim_stable"].get<int>() << "\n";
  }
  if (report.contains("h")) os << "h: " << report["h"].get<int>() << "\n";
  if (report.contains("structure") && report["structure"].contains("ergodic"))
    os << "ergodic: " << (report["structure"]["ergodic"].get<bool>() ? "yes" : "no")
       << "\n";
  if (report.contains("convergence"))
    os << "fitted rate: " << report["convergence"]["fitted_rate"].get<double>()
       << "\n";
  return os.str();
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

//=========================================================================
// CLI commands
//=========================================================================

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::validation, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::hypothesis:
      return kExitHypothesis;
    case ErrorKind::validation:
    case ErrorKind::structural:
    case ErrorKind::unsupported:
      return kExitSchema;
    default:
      return kExitSchema;
  }
}

struct VerifyResult {
  int exit_code = kExitOk;
  std::string message;
};

VerifyResult verify_one(const std::string& path, const AnalysisOptions& opts) {
  VerifyResult result;
  ChannelSpec spec;
  try {
    spec = load_channel_spec(path);
  } catch (const Error& e) {
    return {kExitSchema, std::string(e.what())};
  }
  if (!spec.expected) return {kExitSchema, "spec has no expected block"};

  AnalysisOutcome outcome;
  try {
    outcome = run_analysis(spec, opts);
  } catch (const Error& e) {
    return {exit_code_for(e), std::string(e.what())};
  }
  if (outcome.exit_code != kExitOk) return {outcome.exit_code, outcome.message};

  const corpus::Expected& want = *spec.expected;
  std::ostringstream msg;
  int code = kExitOk;
  MatchResult match = match_multisets(want.peripheral, outcome.peripheral, 1e-6);
  if (!match.matched) {
    code = kExitMismatch;
    msg << "peripheral spectrum mismatch (expected " << want.peripheral.size()
        << " values, matched within " << match.max_distance << "); ";
  }
  if (want.order.has_value() != outcome.order.has_value() ||
      (want.order && *want.order != *outcome.order)) {
    code = kExitMismatch;
    msg << "group order mismatch; ";
  }
  if (want.dim_reversible != outcome.dim_reversible) {
    code = kExitMismatch;
    msg << "dim A_r " << outcome.dim_reversible << " != expected "
        << want.dim_reversible << "; ";
  }
  if (want.ergodic != outcome.ergodic) {
    code = kExitMismatch;
    msg << "ergodicity mismatch; ";
  }
  if (std::abs(want.stable_radius - outcome.stable_radius) >
      1e-6 * std::max(1.0, want.stable_radius)) {
    code = kExitMismatch;
    msg << "stable radius " << outcome.stable_radius << " != expected "
        << want.stable_radius << "; ";
  }
  result.exit_code = code;
  result.message = msg.str();
  return result;
}

}  // namespace

int cmd_analyze(const std::string& input_path, const AnalysisOptions& opts,
                const std::string& out_path, std::ostream& out, std::ostream& err) {
  ChannelSpec spec;
  std::string bytes;
  try {
    bytes = read_file(input_path);
    json j = json::parse(bytes, nullptr, true);
    spec = parse_channel_spec(j);
  } catch (const json::exception& e) {
    err << "schema error: malformed JSON: " << e.what() << "\n";
    return kExitSchema;
  } catch (const Error& e) {
    err << "schema error: " << e.what() << "\n";
    return kExitSchema;
  }

  AnalysisOutcome outcome;
  try {
    outcome = run_analysis(spec, opts);
  } catch (const Error& e) {
    err << "analysis error: " << e.what() << "\n";
    return exit_code_for(e);
  }

  char digest[32];
  std::snprintf(digest, sizeof(digest), "fnv1a:%016llx",
                static_cast<unsigned long long>(fnv1a(bytes)));
  outcome.report["input_digest"] = digest;

  std::string rendered = opts.format == "text"
                             ? report_to_text(outcome.report)
                             : outcome.report.dump(2) + "\n";
  if (out_path.empty()) {
    out << rendered;
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
      err << "cannot write " << out_path << "\n";
      return kExitSchema;
    }
    f << rendered;
  }
  if (outcome.exit_code != kExitOk) err << outcome.message << "\n";
  return outcome.exit_code;
}

int cmd_generate(const std::string& preset, const corpus::PresetParams& params,
                 int cycle_h, const std::vector<int>& cycle_mixing,
                 const std::string& out_path, std::ostream& out, std::ostream& err) {
  std::optional<corpus::CorpusEntry> entry;
  try {
    if (preset == "classical_cycle") {
      entry = corpus::classical_cycle(cycle_h, cycle_mixing, params.seed);
    } else {
      entry = corpus::quantum_preset(preset, params);
    }
  } catch (const Error& e) {
    err << "unknown preset: " << e.what() << "\n";
    return kExitPreset;
  }
  json j = corpus_entry_to_spec_json(*entry);
  std::string rendered = j.dump(2) + "\n";
  if (out_path.empty()) {
    out << rendered;
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
      err << "cannot write " << out_path << "\n";
      return kExitSchema;
    }
    f << rendered;
  }
  return kExitOk;
}

int cmd_verify(const std::string& input_path, const AnalysisOptions& opts, int jobs,
               std::ostream& out, std::ostream& err) {
  namespace fs = std::filesystem;
  if (fs::is_directory(input_path)) {
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(input_path))
      if (entry.is_regular_file() && entry.path().extension() == ".json")
        files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());
    if (files.empty()) {
      err << "no .json specs in " << input_path << "\n";
      return kExitSchema;
    }

    std::vector<VerifyResult> results(files.size());
    std::mutex next_mutex;
    size_t next = 0;
    auto worker = [&]() {
      for (;;) {
        size_t mine;
        {
          std::lock_guard<std::mutex> lock(next_mutex);
          if (next >= files.size()) return;
          mine = next++;
        }
        results[mine] = verify_one(files[mine], opts);
      }
    };
    int n_threads = std::max(1, jobs);
    std::vector<std::thread> pool;
    for (int i = 1; i < n_threads; ++i) pool.emplace_back(worker);
    worker();
    for (std::thread& th : pool) th.join();

    int code = kExitOk;
    for (size_t i = 0; i < files.size(); ++i) {
      out << files[i] << ": "
          << (results[i].exit_code == kExitOk ? "ok" : "FAIL") << "\n";
      if (results[i].exit_code != kExitOk) {
        err << files[i] << ": " << results[i].message << "\n";
        code = results[i].exit_code;
      }
    }
    return code;
  }

  VerifyResult result = verify_one(input_path, opts);
  if (result.exit_code == kExitOk) {
    out << input_path << ": ok\n";
  } else {
    err << input_path << ": " << result.message << "\n";
  }
  return result.exit_code;
}

}  // namespace io
}  // namespace jdlg
