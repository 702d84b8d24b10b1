#ifndef JDLG_CHANNEL_HPP
#define JDLG_CHANNEL_HPP

#include <optional>
#include <string>
#include <vector>

#include "jdlg/algebra.hpp"

namespace jdlg {

//=========================================================================
// ChannelMap
//=========================================================================

// A linear map on the algebra stored as an N x N superoperator on the
// coordinate space (column-major within each block, blocks concatenated).
// Kraus operators, when attached, act on the block-diagonal embedding
// space; the Choi matrix is only kept for a single full matrix block,
// under the convention C = sum_ij E_ij (x) T(E_ij).
struct ChannelMap {
  BlockAlgebra algebra;
  Mat superop;
  std::optional<std::vector<Mat>> kraus;
  std::optional<Mat> choi;
  std::string name;

  AlgebraElement apply(const AlgebraElement& x) const;
  Mat power(int n) const;  // superoperator power
};

ChannelMap channel_from_superop(BlockAlgebra a, Mat superop, std::string name = "");

ChannelMap identity_channel(const BlockAlgebra& a);

// Build the channel x -> sum_j K_j x K_j^* from Kraus operators on the
// embedding space. Rejects Kraus sets that do not preserve the
// block-diagonal structure.
ChannelMap from_kraus(const BlockAlgebra& a, std::vector<Mat> kraus,
                      std::string name = "");

// Choi conversions, single full matrix block only.
Mat to_choi(const ChannelMap& t);
ChannelMap from_choi(const BlockAlgebra& a, const Mat& choi, std::string name = "");

struct CpDiagnostic {
  bool completely_positive = false;
  double min_choi_eigenvalue = 0;   // over all block pairs
  double hermiticity_residual = 0;  // of the Choi blocks
};

// Blockwise Choi positivity test: T is CP iff every block-pair component
// M_{n_j} -> M_{n_i} has a PSD Choi matrix.
CpDiagnostic is_completely_positive(const ChannelMap& t, double tol = 1e-9);

bool is_unital(const ChannelMap& t, double tol = 1e-9);

// Preadjoint T_* with tr((T_* rho) x) = tr(rho (T x)); the conjugate
// transpose of the superoperator under the trace pairing.
ChannelMap preadjoint(const ChannelMap& t);

// T1 after T2
ChannelMap compose(const ChannelMap& t1, const ChannelMap& t2);

struct InvariantStateResult {
  NormalState state;
  bool faithful = false;
  int fixed_space_dim = 0;
  double residual = 0;  // ||T_* rho - rho||
};

// Fixed density matrix of the preadjoint, of maximal support (the
// eigenprojection for eigenvalue one applied to the maximally mixed
// state). Errors when the preadjoint has no fixed state within tol.
InvariantStateResult find_invariant_state(const ChannelMap& t, double tol = 1e-9);

struct InvarianceDiagnostic {
  std::vector<double> block_residuals;
  double max_residual = 0;
  bool within_tolerance = false;
};

InvarianceDiagnostic check_invariance(const ChannelMap& t, const NormalState& phi,
                                      double tol = 1e-9);

// min eigenvalue of T(x*x) - T(x)*T(x); nonnegative for Schwarz maps
double schwarz_defect_min_eig(const ChannelMap& t, const AlgebraElement& x);

//=========================================================================
// SemigroupSpec
//=========================================================================

struct SemigroupSpec {
  std::vector<ChannelMap> generators;
  bool commuting = false;
};

// Validates pairwise commutation; rejects non-commuting families naming
// the offending pair. Only single-generator and verified-commuting
// families are supported.
SemigroupSpec make_semigroup(std::vector<ChannelMap> generators,
                             double tol = 1e-10);

}  // namespace jdlg

#endif
