#ifndef JDLG_DECOMPOSITION_HPP
#define JDLG_DECOMPOSITION_HPP

#include <optional>
#include <string>
#include <vector>

#include "jdlg/gns.hpp"

namespace jdlg {

//=========================================================================
// Spectral data of the superoperator
//=========================================================================

struct SpectralData {
  // sorted by descending modulus, ties by phase in [0, 2*pi)
  std::vector<Complex> eigenvalues;
  Mat right_vectors;                    // columns aligned with eigenvalues
  std::vector<int> peripheral;          // indices with |lambda| >= 1 - eps
  double stable_radius = 0;             // max non-peripheral modulus
  std::vector<int> defective_peripheral;
  std::vector<std::string> warnings;    // near-threshold eigenvalues
};

// Full eigendecomposition of the superoperator. Near-threshold
// eigenvalues with modulus in (1 - 1e-6, 1 - eps_peripheral] trigger a
// warning listing them.
SpectralData eigendecompose(const ChannelMap& t, double eps_peripheral = 1e-8);

double stable_radius(const SpectralData& data);

//=========================================================================
// The splitting A = A_r + A_s
//=========================================================================

struct JdlgSplit {
  Mat projection;                              // P as a superoperator
  std::vector<AlgebraElement> reversible_basis;  // phi-ONB of ran P
  std::vector<AlgebraElement> stable_basis;      // phi-ONB of ker P
  double stable_radius = 0;
  std::optional<int> group_order;              // filled by the structure layer
  std::string method = "eigendecomposition";

  // construction diagnostics
  double idempotency_residual = 0;     // ||P^2 - P||
  double phi_symmetry_residual = 0;    // ||P - P^phi|| after symmetrization
  double symmetrization_move = 0;      // how far symmetrization moved P
  double commutation_residual = 0;     // ||PT - TP||
  double restricted_condition = 1;     // cond of T|A_r in the phi metric
  double basis_orthonormality = 0;     // max Gram deviation over both bases

  int dim_reversible() const { return static_cast<int>(reversible_basis.size()); }
  int dim_stable() const { return static_cast<int>(stable_basis.size()); }
};

// Peripheral spectral projection, phi-symmetrized, with phi-orthonormal
// bases of ran P and ker P. Requires a faithful state and a passing
// contraction hypothesis; refuses otherwise. A defective peripheral
// eigenvalue after a passing hypothesis is an internal inconsistency.
JdlgSplit jdlg_split(const ChannelMap& t, const NormalState& phi,
                     double eps_peripheral = 1e-8, double faithful_tol = 1e-10);

//=========================================================================
// Averaging oracles
//=========================================================================

// Independent oracle for the lambda-eigenprojection: the square of the
// tail-windowed Cesaro average of conj(lambda)^n T^n over n in [N, 2N)
// (triangular averaging, by the convolution identity). Cross terms decay
// like O(1/N^2) and cancel exactly over full periods when the peripheral
// eigenvalue ratios are roots of unity; the stable part contributes
// O(r^N). Requires |lambda| = 1 within 1e-12.
Mat averaging_projection_oracle(const ChannelMap& t, Complex lambda, int n_iter);

// Sum of the oracle over a set of peripheral eigenvalues, sharing one
// power sweep. Equals the sum of individual oracle calls bit for bit.
Mat peripheral_projection_oracle(const ChannelMap& t,
                                 const std::vector<Complex>& lambdas, int n_iter);

// Plain Cesaro mean (1/N) sum_{n<N} T^n; converges to the projection
// onto the fixed space at rate O(1/N).
Mat mean_ergodic_projection(const ChannelMap& t, int n_iter);

//=========================================================================
// Membership diagnostics
//=========================================================================

struct IsometryDiagnostic {
  bool pass = false;
  double max_relative_defect = 0;   // on the quadratic form
  double max_polarized_defect = 0;  // on sampled pairs
};

// Checks phi((Tx)*(Tx)) = phi(x*x) for every state of the family, plus
// the polarized form phi((Tx)*(Ty)) = phi(x*y) against sampled y.
IsometryDiagnostic isometry_check(const AlgebraElement& x, const ChannelMap& t,
                                  const StateFamily& family, double tol,
                                  int samples = 8, std::uint64_t seed = 17);

struct KernelDiagnostic {
  double projection_norm = 0;       // ||P x||_phi
  double min_orbit_norm = 0;        // min_n ||T^n x||_phi
  double fitted_rate = 0;           // geometric fit of the orbit decay
  bool stable_certified = false;
  std::vector<double> orbit_norms;
};

KernelDiagnostic kernel_membership(const AlgebraElement& x, const JdlgSplit& split,
                                   const ChannelMap& t, const NormalState& phi,
                                   double tol = 1e-9, int n_max = 64);

}  // namespace jdlg

#endif
