#ifndef JDLG_IO_HPP
#define JDLG_IO_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "jdlg/corpus.hpp"

namespace jdlg {
namespace io {

inline constexpr int kExitOk = 0;
inline constexpr int kExitHypothesis = 2;
inline constexpr int kExitSchema = 3;
inline constexpr int kExitPreset = 4;
inline constexpr int kExitMismatch = 5;
inline constexpr const char* kToolVersion = "jdlg 1.0.0";

struct Tolerances {
  double peripheral = 1e-8;
  double hypothesis = 1e-9;
  double faithful = 1e-10;
};

// Parsed channel spec file: the algebra, exactly one map representation,
// optional states, tolerance overrides and an optional expected block.
struct ChannelSpec {
  ChannelMap channel;
  std::vector<NormalState> states;
  Tolerances tolerances;
  std::optional<corpus::Expected> expected;
  std::optional<std::uint64_t> seed;
  std::string name;
  std::string provenance;
};

ChannelSpec parse_channel_spec(const nlohmann::json& j);
ChannelSpec load_channel_spec(const std::string& path);
nlohmann::json corpus_entry_to_spec_json(const corpus::CorpusEntry& entry);

struct AnalysisOptions {
  Tolerances tolerances;
  // which tolerance flags were given on the command line; unset ones
  // defer to the values stored in the spec file
  bool peripheral_overridden = false;
  bool hypothesis_overridden = false;
  bool faithful_overridden = false;
  int n_max = 256;
  int oracle_iters = 10000;
  int probes = 8;
  std::uint64_t seed = 17;
  bool validate_oracle = true;
  std::string format = "json";

  Tolerances effective(const Tolerances& from_file) const {
    Tolerances t = from_file;
    if (peripheral_overridden) t.peripheral = tolerances.peripheral;
    if (hypothesis_overridden) t.hypothesis = tolerances.hypothesis;
    if (faithful_overridden) t.faithful = tolerances.faithful;
    return t;
  }
};

struct AnalysisOutcome {
  int exit_code = kExitOk;
  nlohmann::json report;
  std::string message;  // one-line diagnostic for nonzero exits
  // summary fields used by verification
  std::vector<Complex> peripheral;
  std::optional<int> order;
  int dim_reversible = 0;
  bool ergodic = false;
  double stable_radius = 0;
};

// The full pipeline: invariant state (unless provided), hypothesis check,
// splitting, oracle validation, structure and convergence reports.
AnalysisOutcome run_analysis(const ChannelSpec& spec, const AnalysisOptions& opts);

std::string report_to_text(const nlohmann::json& report);

std::uint64_t fnv1a(const std::string& bytes);

// CLI entry points; all diagnostics go to err.
int cmd_analyze(const std::string& input_path, const AnalysisOptions& opts,
                const std::string& out_path, std::ostream& out, std::ostream& err);
int cmd_generate(const std::string& preset, const corpus::PresetParams& params,
                 int cycle_h, const std::vector<int>& cycle_mixing,
                 const std::string& out_path, std::ostream& out, std::ostream& err);
int cmd_verify(const std::string& input_path, const AnalysisOptions& opts, int jobs,
               std::ostream& out, std::ostream& err);

}  // namespace io
}  // namespace jdlg

#endif
