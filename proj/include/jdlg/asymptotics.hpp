#ifndef JDLG_ASYMPTOTICS_HPP
#define JDLG_ASYMPTOTICS_HPP

#include <string>
#include <vector>

#include "jdlg/decomposition.hpp"

namespace jdlg {

// The asymptotically periodic operator S = T o P. Powers satisfy
// S^n = T^n P for n >= 1; when the group order h is known, S^h acts as
// the identity on the reversible part.
ChannelMap periodic_part(const ChannelMap& t, const JdlgSplit& split);

struct ConvergenceProbe {
  std::string kind;                // "stable" or "reversible"
  std::vector<double> cesaro;      // (1/n) sum_{k<n} |<T^k x, psi>|
  double loglog_slope = 0;         // fitted on the tail
};

struct ConvergenceReport {
  std::vector<double> difference_norms;  // ||T^n - S^n||_phi, n = 1..n_max
  double fitted_rate = 0;                // geometric fit of the tail
  double stable_radius = 0;
  std::vector<ConvergenceProbe> probes;
};

// ||T^n - S^n|| in the phi-metric operator norm, a log-linear rate fit,
// and Cesaro absolute averages per probe pair: stable probes decay like
// 1/n, reversible probes with a nontrivial character oscillate without
// decay.
ConvergenceReport convergence_report(const ChannelMap& t, const ChannelMap& s,
                                     const NormalState& phi, const JdlgSplit& split,
                                     int n_max = 256, int probes = 8,
                                     std::uint64_t seed = 41);

}  // namespace jdlg

#endif
