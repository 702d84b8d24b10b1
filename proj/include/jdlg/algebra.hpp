#ifndef JDLG_ALGEBRA_HPP
#define JDLG_ALGEBRA_HPP

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace jdlg {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

//=========================================================================
// Errors
//=========================================================================

enum class ErrorKind {
  structural,   // shape mismatch, wrong algebra
  validation,   // bad input data (non-state, non-faithful where required)
  hypothesis,   // contraction hypothesis violated / refused
  unsupported,  // representation or map class not supported
  numeric,      // solver failure, internal inconsistency
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

//=========================================================================
// BlockAlgebra
//=========================================================================

// A finite-dimensional W*-algebra modeled as a direct sum of full matrix
// blocks M_{n_1} + ... + M_{n_k}. The commutative case is block_dims of
// all ones. Elements are stored one matrix per block; the coordinate
// space stacks each block column-major and concatenates blocks in order.
struct BlockAlgebra {
  std::vector<int> block_dims;

  BlockAlgebra() = default;
  explicit BlockAlgebra(std::vector<int> dims);

  static BlockAlgebra full(int n) { return BlockAlgebra({n}); }
  static BlockAlgebra classical(int n) {
    return BlockAlgebra(std::vector<int>(static_cast<size_t>(n), 1));
  }

  int num_blocks() const { return static_cast<int>(block_dims.size()); }
  // N = sum n_i^2, the dimension of the coordinate space
  int coord_dim() const;
  // D = sum n_i, the dimension of the block-diagonal embedding space
  int embed_dim() const;
  // offset of block b in the coordinate vector
  int coord_offset(int b) const;
  // offset of block b along the diagonal of the embedding space
  int embed_offset(int b) const;

  bool operator==(const BlockAlgebra& o) const {
    return block_dims == o.block_dims;
  }
};

//=========================================================================
// AlgebraElement
//=========================================================================

class AlgebraElement {
public:
  AlgebraElement() = default;
  AlgebraElement(BlockAlgebra algebra, std::vector<Mat> blocks);

  static AlgebraElement zero(const BlockAlgebra& a);
  static AlgebraElement identity(const BlockAlgebra& a);
  static AlgebraElement from_coords(const BlockAlgebra& a, const Vec& coords);

  const BlockAlgebra& algebra() const { return algebra_; }
  const Mat& block(int b) const { return blocks_[static_cast<size_t>(b)]; }
  Mat& block(int b) { return blocks_[static_cast<size_t>(b)]; }

  // column-major per block, blocks concatenated in order
  Vec coords() const;
  // block-diagonal matrix on the embedding space
  Mat embedded() const;

  AlgebraElement adjoint() const;
  double frobenius_norm() const;
  bool is_zero(double tol = 0.0) const;

  AlgebraElement operator+(const AlgebraElement& o) const;
  AlgebraElement operator-(const AlgebraElement& o) const;
  AlgebraElement operator*(Complex s) const;

private:
  BlockAlgebra algebra_;
  std::vector<Mat> blocks_;
};

// Blockwise algebra product x*y. Associative and unital; shapes must match.
AlgebraElement mul(const AlgebraElement& x, const AlgebraElement& y);

// Compress a block-diagonal matrix on the embedding space back to an
// element, checking that off-block entries are below tol.
AlgebraElement compress_embedded(const BlockAlgebra& a, const Mat& m,
                                 double tol = 1e-10);

//=========================================================================
// NormalState
//=========================================================================

// A normal state phi(x) = sum_i tr(rho_i x_i) given by one positive
// semidefinite matrix per block with total trace one. Inputs within 1e-8
// of trace one are renormalized exactly; larger deviations are rejected.
class NormalState {
public:
  NormalState(BlockAlgebra algebra, std::vector<Mat> rho,
              double psd_tol = 1e-10);

  static NormalState maximally_mixed(const BlockAlgebra& a);

  const BlockAlgebra& algebra() const { return algebra_; }
  const Mat& rho(int b) const { return rho_[static_cast<size_t>(b)]; }

  Complex value(const AlgebraElement& x) const;
  // density matrices as an algebra element (for preadjoint application)
  AlgebraElement as_element() const;

  // faithful iff lambda_min(rho_i) > tol * lambda_max(rho_i) on every block
  bool faithful(double tol = 1e-10) const;
  double min_eigenvalue() const;

private:
  BlockAlgebra algebra_;
  std::vector<Mat> rho_;
};

// <x,y>_phi := phi(y* x)
Complex inner_phi(const NormalState& phi, const AlgebraElement& x,
                  const AlgebraElement& y);
double norm_phi(const NormalState& phi, const AlgebraElement& x);

// phi-orthonormal basis of the whole algebra, first element the unit.
// Requires phi faithful; otherwise directs the caller to the support
// compression in the gns module.
std::vector<AlgebraElement> orthonormal_basis(const BlockAlgebra& a,
                                              const NormalState& phi);

//=========================================================================
// StateFamily
//=========================================================================

struct StateFamily {
  std::vector<NormalState> states;

  StateFamily() = default;
  explicit StateFamily(std::vector<NormalState> s) : states(std::move(s)) {}
  static StateFamily single(NormalState s);

  // jointly faithful iff the supports of the family sum to the unit
  bool jointly_faithful(double tol = 1e-10) const;
  // uniform mixture of the family; faithful iff the family is jointly so
  NormalState mixture() const;
};

//=========================================================================
// PhiGeometry: coordinate-level phi-metric machinery
//=========================================================================

// Precomputed Gram data for a faithful state: G = blockdiag(rho_i^T (x) I),
// its square root and inverse square root. Used to take phi-adjoints of
// superoperators and phi-operator norms.
class PhiGeometry {
public:
  PhiGeometry(BlockAlgebra algebra, NormalState phi);

  const BlockAlgebra& algebra() const { return algebra_; }
  const NormalState& state() const { return phi_; }
  const Mat& gram() const { return gram_; }

  Complex coords_inner(const Vec& x, const Vec& y) const;  // <x,y>_phi
  double coords_norm(const Vec& x) const;

  // phi-adjoint of a superoperator: G^{-1} A^dag G
  Mat superop_adjoint(const Mat& superop) const;
  // operator norm induced by ||.||_phi: sigma_max(G^{1/2} A G^{-1/2})
  double superop_norm(const Mat& superop) const;

private:
  BlockAlgebra algebra_;
  NormalState phi_;
  Mat gram_, gram_sqrt_, gram_isqrt_;
};

//=========================================================================
// Deterministic sampling helpers
//=========================================================================

// Thin PRNG wrapper with hand-rolled output functions so that streams
// depend only on the seed, not on library distribution internals.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();
  double uniform();                 // [0, 1)
  double uniform(double lo, double hi);
  double normal();                  // standard normal, Box-Muller
  Complex normal_complex();

  Mat ginibre(int rows, int cols);            // iid complex normal entries
  Mat random_unitary(int n);                  // QR of Ginibre, phases fixed
  Mat random_hermitian(int n);
  Mat random_density(int n);                  // normalized G G^dag

  AlgebraElement random_element(const BlockAlgebra& a);
  AlgebraElement random_hermitian_element(const BlockAlgebra& a);
  AlgebraElement random_psd_element(const BlockAlgebra& a);
  NormalState random_state(const BlockAlgebra& a);

private:
  std::uint64_t state_;
  std::optional<double> normal_spare_;
};

}  // namespace jdlg

#endif
