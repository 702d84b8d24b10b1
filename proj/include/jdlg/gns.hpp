#ifndef JDLG_GNS_HPP
#define JDLG_GNS_HPP

#include <string>
#include <vector>

#include "jdlg/channel.hpp"

namespace jdlg {

//=========================================================================
// Support splitting A = K_phi + L_phi
//=========================================================================

struct SupportSplit {
  AlgebraElement support;                // p_phi, self-adjoint idempotent
  std::vector<AlgebraElement> k_basis;   // phi-orthonormal basis of A p_phi
  std::vector<AlgebraElement> l_basis;   // basis of the seminorm kernel A p_phi^perp
};

// Spectral support of the density matrices: eigenvalues below
// 1e-12 * lambda_max (per block) count as zero.
SupportSplit support_projection(const BlockAlgebra& a, const NormalState& phi);

//=========================================================================
// GNS representation of a channel
//=========================================================================

// Matrix of the compressed action x p -> (T x) p on K_phi with respect to
// a stored phi-orthonormal basis.
struct GnsOperator {
  Mat matrix;
  std::vector<AlgebraElement> basis;

  double spectral_norm() const;
};

// Requires T to leave L_phi invariant when phi is not faithful; a
// violation means the contraction hypothesis fails and is reported as
// such. For faithful phi this is the full phi-metric matrix of T.
GnsOperator gns_matrix(const ChannelMap& t, const NormalState& phi,
                       double invariance_tol = 1e-9);

// Same, but in a caller-supplied phi-orthonormal basis (validated).
GnsOperator gns_matrix_in_basis(const ChannelMap& t, const NormalState& phi,
                                const std::vector<AlgebraElement>& onb);

//=========================================================================
// Contraction hypothesis diagnostic
//=========================================================================

struct HypothesisDiagnostic {
  bool pass = false;
  std::vector<double> norms;          // GNS operator norm per state
  std::vector<std::string> warnings;  // norms clamped from (1, 1+tol]
  std::string failure;                // empty when pass
};

// The spectral norm of the GNS operator is <= 1 exactly when
// phi((Tx)*(Tx)) <= phi(x*x) holds for every x; values in (1, 1+tol]
// are clamped to PASS with a warning.
HypothesisDiagnostic verify_hypothesis(const ChannelMap& t, const StateFamily& family,
                                       double tol = 1e-9);

//=========================================================================
// Peripheral spectra of T, its preadjoint and its GNS extension
//=========================================================================

struct PeripheralComparison {
  std::vector<Complex> on_algebra;   // T
  std::vector<Complex> on_predual;   // T_*
  std::vector<Complex> on_gns;       // T_phi
  bool equal = false;
  double max_match_distance = 0;
  std::vector<std::pair<int, int>> algebra_predual_pairs;
  std::vector<std::pair<int, int>> algebra_gns_pairs;
};

// Requires a faithful invariant state and a passing hypothesis check.
PeripheralComparison compare_peripheral_spectra(const ChannelMap& t,
                                                const NormalState& phi,
                                                double peripheral_tol = 1e-8,
                                                double match_tol = 1e-9);

}  // namespace jdlg

#endif
