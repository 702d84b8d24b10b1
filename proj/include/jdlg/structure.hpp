#ifndef JDLG_STRUCTURE_HPP
#define JDLG_STRUCTURE_HPP

#include <optional>
#include <string>
#include <vector>

#include "jdlg/decomposition.hpp"

namespace jdlg {

//=========================================================================
// Peripheral group detection
//=========================================================================

struct PeripheralGroup {
  std::vector<Complex> eigenvalues;  // peripheral, with multiplicity
  // smallest h <= max_order with every phase on the (1/h) lattice
  std::optional<int> order;
  bool subgroup_closed = false;
  double max_closure_defect = 0;
  // for each pair (i, j), the index of the peripheral eigenvalue matching
  // lambda_i * conj(lambda_j); -1 when no match within tolerance
  std::vector<std::vector<int>> closure_certificate;
};

PeripheralGroup detect_peripheral_group(const SpectralData& data,
                                        double tol = 1e-8, int max_order = 64);

//=========================================================================
// Choi-Effros product and conditional expectation
//=========================================================================

// x . y := P(x y) on ran P. Requires a completely positive generator and
// inputs in ran P within tol.
AlgebraElement choi_effros_product(const ChannelMap& t, const JdlgSplit& split,
                                   const NormalState& phi, const AlgebraElement& x,
                                   const AlgebraElement& y, double tol = 1e-9);

struct ConditionalExpectationCheck {
  bool faithful = false;
  bool skipped = false;              // P not faithful: hypothesis of the check fails
  double phi_composition_residual = 0;  // ||phi o P - phi||
  double cone_min_ratio = 0;            // min ||P x|| / ||x|| over PSD samples
  double max_residual = 0;              // ||P(y x z) - y P(x) z|| over samples
  double subalgebra_residual = 0;       // ||(I - P)(r_i r_j)|| over basis pairs
};

ConditionalExpectationCheck conditional_expectation_check(
    const JdlgSplit& split, const ChannelMap& t, const NormalState& phi,
    int samples = 64, std::uint64_t seed = 23);

//=========================================================================
// Multiplicative domain
//=========================================================================

// Basis of {x : T(x*y) = T(x)* T(y) for all y}, computed as the null
// space of the defect map in its first argument and verified against the
// quadratic characterization T(x)*T(x) = T(x*x) on the basis and on
// random non-members. Requires T to satisfy the Schwarz inequality.
std::vector<AlgebraElement> multiplicative_domain(const ChannelMap& t,
                                                  const NormalState& phi,
                                                  double tol = 1e-8,
                                                  std::uint64_t seed = 29);

//=========================================================================
// Unitary eigenvectors, trace, automorphism
//=========================================================================

struct UnitaryEigenvector {
  Complex eigenvalue;
  AlgebraElement u;
  double unitarity_residual = 0;  // ||u* u - 1||
  double eigen_residual = 0;      // ||T u - lambda u||
};

// Discrete character averages (1/h) sum_j exp(2 pi i j k / h) T^j(x0)
// over the cyclic group, seeded by the first non-fixed reversible basis
// vector with PRNG retries. Requires an ergodic system and resolved h.
std::vector<UnitaryEigenvector> unitary_eigenvectors(const ChannelMap& t,
                                                     const JdlgSplit& split,
                                                     const NormalState& phi, int h,
                                                     std::uint64_t seed = 31);

struct TraceCheck {
  double trace_residual = 0;          // max |phi(xy) - phi(yx)| on A_r pairs
  double orthogonality_residual = 0;  // max |phi(u_j* u_k)|, j != k
};

TraceCheck trace_check(const NormalState& phi, const JdlgSplit& split,
                       const std::vector<UnitaryEigenvector>& eigenvectors);

struct AutomorphismCheck {
  double multiplicativity_residual = 0;  // ||T(x.y) - T(x).T(y)|| on A_r pairs
  double star_residual = 0;              // ||T(x*) - T(x)*||
  double min_singular_value = 0;         // of T restricted to A_r
  double max_singular_value = 0;
};

// Uses the Choi-Effros product unless the subalgebra flag says ran P is
// closed under the ordinary product.
AutomorphismCheck automorphism_check(const ChannelMap& t, const JdlgSplit& split,
                                     const NormalState& phi, bool subalgebra);

//=========================================================================
// Full Perron-Frobenius report
//=========================================================================

struct StructureReport {
  // W*-dynamical-system preconditions
  bool completely_positive = false;
  bool unital = false;
  bool state_invariant = false;
  bool state_faithful = false;
  double min_choi_eigenvalue = 0;
  double unitality_residual = 0;
  double invariance_residual = 0;

  bool ergodic = false;
  int fixed_space_dim = 0;
  bool partial = false;  // non-ergodic: subgroup/rotation claims not asserted

  PeripheralGroup group;
  bool peripheral_simple = false;
  int max_geometric_multiplicity = 0;
  // multiset distance Sp(T) vs alpha Sp(T), one entry per distinct
  // peripheral alpha, and the maximum over them
  std::vector<std::pair<Complex, double>> rotation_defects;
  double max_rotation_defect = 0;

  bool subalgebra = false;
  double subalgebra_residual = 0;
  double conditional_expectation_residual = 0;
  ConditionalExpectationCheck expectation;

  std::vector<UnitaryEigenvector> eigenvectors;
  double trace_residual = 0;
  double orthogonality_residual = 0;
  double automorphism_residual = 0;
  double star_residual = 0;
  double eigenvector_relation_residual = 0;  // T(u x) = lambda u T(x)
};

// Requires the W*-dynamical-system axioms (CP, unital, invariant faithful
// state); failures raise a structured refusal naming the axiom.
// Non-ergodic systems produce a partial report, never an error.
StructureReport perron_frobenius_report(const ChannelMap& t, const NormalState& phi,
                                        double peripheral_tol = 1e-8,
                                        std::uint64_t seed = 37);

}  // namespace jdlg

#endif
