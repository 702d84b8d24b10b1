#ifndef JDLG_CORPUS_HPP
#define JDLG_CORPUS_HPP

#include <optional>
#include <string>
#include <vector>

#include "jdlg/channel.hpp"

namespace jdlg {
namespace corpus {

struct Expected {
  std::vector<Complex> peripheral;  // multiset
  std::optional<int> order;         // h; present only when the action resolves it
  int dim_reversible = 0;
  bool ergodic = false;
  double stable_radius = 0;
};

struct CorpusEntry {
  ChannelMap channel;
  NormalState state;
  Expected expected;
  std::string provenance;
  std::uint64_t seed = 0;
};

// h-cycle plus strictly mixing doubly stochastic blocks on a commutative
// algebra, with the uniform invariant state. Mixing blocks are lazy
// averaging maps (1-a) I + a J/m with a drawn from the seed, so each
// contributes one peripheral eigenvalue 1 and a stable eigenvalue 1-a.
CorpusEntry classical_cycle(int h, const std::vector<int>& mixing_block_sizes = {},
                            std::uint64_t seed = 1);

struct PresetParams {
  int n = 2;                  // matrix block dimension
  double p = 0.75;            // dephasing weight
  double theta = 2.3999632297286533;  // unitary_conj rotation (golden angle)
  std::uint64_t seed = 1;
};

// name in {identity, dephasing, depolarize_to_mixed, flip_pinch,
//          unitary_conj, clock_shift_mixture, random_unital}
CorpusEntry quantum_preset(const std::string& name, const PresetParams& params = {});

std::vector<std::string> preset_names();

// The standard corpus used by the acceptance suite: classical cycles for
// h = 2..7, two cycle-plus-mixing entries and the quantum presets.
std::vector<CorpusEntry> default_corpus();

}  // namespace corpus
}  // namespace jdlg

#endif
