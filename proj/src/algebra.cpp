#include "jdlg/algebra.hpp"

#include <cmath>
#include <numeric>

namespace jdlg {

//=========================================================================
// BlockAlgebra
//=========================================================================

BlockAlgebra::BlockAlgebra(std::vector<int> dims) : block_dims(std::move(dims)) {
  if (block_dims.empty())
    throw Error(ErrorKind::structural, "algebra needs at least one block");
  for (int n : block_dims)
    if (n < 1)
      throw Error(ErrorKind::structural, "block dimensions must be >= 1");
}

int BlockAlgebra::coord_dim() const {
  int n = 0;
  for (int d : block_dims) n += d * d;
  return n;
}

int BlockAlgebra::embed_dim() const {
  return std::accumulate(block_dims.begin(), block_dims.end(), 0);
}

int BlockAlgebra::coord_offset(int b) const {
  int off = 0;
  for (int i = 0; i < b; ++i) off += block_dims[static_cast<size_t>(i)] * block_dims[static_cast<size_t>(i)];
  return off;
}

int BlockAlgebra::embed_offset(int b) const {
  int off = 0;
  for (int i = 0; i < b; ++i) off += block_dims[static_cast<size_t>(i)];
  return off;
}

//=========================================================================
// AlgebraElement
//=========================================================================

AlgebraElement::AlgebraElement(BlockAlgebra algebra, std::vector<Mat> blocks)
    : algebra_(std::move(algebra)), blocks_(std::move(blocks)) {
  if (static_cast<int>(blocks_.size()) != algebra_.num_blocks())
    throw Error(ErrorKind::structural, "wrong number of blocks");
  for (int b = 0; b < algebra_.num_blocks(); ++b) {
    int n = algebra_.block_dims[static_cast<size_t>(b)];
    const Mat& m = blocks_[static_cast<size_t>(b)];
    if (m.rows() != n || m.cols() != n)
      throw Error(ErrorKind::structural,
                  "block " + std::to_string(b) + " has shape " +
                      std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                      ", expected " + std::to_string(n));
  }
}

AlgebraElement AlgebraElement::zero(const BlockAlgebra& a) {
  std::vector<Mat> blocks;
  for (int n : a.block_dims) blocks.push_back(Mat::Zero(n, n));
  return AlgebraElement(a, std::move(blocks));
}

AlgebraElement AlgebraElement::identity(const BlockAlgebra& a) {
  std::vector<Mat> blocks;
  for (int n : a.block_dims) blocks.push_back(Mat::Identity(n, n));
  return AlgebraElement(a, std::move(blocks));
}

AlgebraElement AlgebraElement::from_coords(const BlockAlgebra& a, const Vec& coords) {
  if (coords.size() != a.coord_dim())
    throw Error(ErrorKind::structural, "coordinate vector has wrong length");
  std::vector<Mat> blocks;
  int off = 0;
  for (int n : a.block_dims) {
    Mat m(n, n);
    for (int c = 0; c < n; ++c)
      for (int r = 0; r < n; ++r) m(r, c) = coords(off + c * n + r);
    off += n * n;
    blocks.push_back(std::move(m));
  }
  return AlgebraElement(a, std::move(blocks));
}

Vec AlgebraElement::coords() const {
  Vec v(algebra_.coord_dim());
  int off = 0;
  for (const Mat& m : blocks_) {
    int n = static_cast<int>(m.rows());
    for (int c = 0; c < n; ++c)
      for (int r = 0; r < n; ++r) v(off + c * n + r) = m(r, c);
    off += n * n;
  }
  return v;
}

Mat AlgebraElement::embedded() const {
  int d = algebra_.embed_dim();
  Mat m = Mat::Zero(d, d);
  for (int b = 0; b < algebra_.num_blocks(); ++b) {
    int n = algebra_.block_dims[static_cast<size_t>(b)];
    int off = algebra_.embed_offset(b);
    m.block(off, off, n, n) = blocks_[static_cast<size_t>(b)];
  }
  return m;
}

AlgebraElement AlgebraElement::adjoint() const {
  std::vector<Mat> blocks;
  for (const Mat& m : blocks_) blocks.push_back(m.adjoint());
  return AlgebraElement(algebra_, std::move(blocks));
}

double AlgebraElement::frobenius_norm() const {
  double s = 0;
  for (const Mat& m : blocks_) s += m.squaredNorm();
  return std::sqrt(s);
}

bool AlgebraElement::is_zero(double tol) const {
  return frobenius_norm() <= tol;
}

AlgebraElement AlgebraElement::operator+(const AlgebraElement& o) const {
  if (!(algebra_ == o.algebra_))
    throw Error(ErrorKind::structural, "elements of different algebras");
  std::vector<Mat> blocks;
  for (size_t b = 0; b < blocks_.size(); ++b) blocks.push_back(blocks_[b] + o.blocks_[b]);
  return AlgebraElement(algebra_, std::move(blocks));
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& o) const {
  if (!(algebra_ == o.algebra_))
    throw Error(ErrorKind::structural, "elements of different algebras");
  std::vector<Mat> blocks;
  for (size_t b = 0; b < blocks_.size(); ++b) blocks.push_back(blocks_[b] - o.blocks_[b]);
  return AlgebraElement(algebra_, std::move(blocks));
}

AlgebraElement AlgebraElement::operator*(Complex s) const {
  std::vector<Mat> blocks;
  for (const Mat& m : blocks_) blocks.push_back(s * m);
  return AlgebraElement(algebra_, std::move(blocks));
}

AlgebraElement mul(const AlgebraElement& x, const AlgebraElement& y) {
  if (!(x.algebra() == y.algebra()))
    throw Error(ErrorKind::structural, "product of elements of different algebras");
  std::vector<Mat> blocks;
  for (int b = 0; b < x.algebra().num_blocks(); ++b)
    blocks.push_back(x.block(b) * y.block(b));
  return AlgebraElement(x.algebra(), std::move(blocks));
}

AlgebraElement compress_embedded(const BlockAlgebra& a, const Mat& m, double tol) {
  int d = a.embed_dim();
  if (m.rows() != d || m.cols() != d)
    throw Error(ErrorKind::structural, "embedded matrix has wrong shape");
  std::vector<Mat> blocks;
  double off_norm2 = 0;
  Mat rest = m;
  for (int b = 0; b < a.num_blocks(); ++b) {
    int n = a.block_dims[static_cast<size_t>(b)];
    int off = a.embed_offset(b);
    blocks.push_back(m.block(off, off, n, n));
    rest.block(off, off, n, n).setZero();
  }
  off_norm2 = rest.squaredNorm();
  if (std::sqrt(off_norm2) > tol * std::max(1.0, m.norm()))
    throw Error(ErrorKind::structural,
                "matrix does not preserve the block-diagonal structure");
  return AlgebraElement(a, std::move(blocks));
}

//=========================================================================
// NormalState
//=========================================================================

NormalState::NormalState(BlockAlgebra algebra, std::vector<Mat> rho, double psd_tol)
    : algebra_(std::move(algebra)), rho_(std::move(rho)) {
  if (static_cast<int>(rho_.size()) != algebra_.num_blocks())
    throw Error(ErrorKind::structural, "wrong number of density blocks");
  double trace = 0;
  double max_eig = 0;
  double min_eig = 0;
  for (int b = 0; b < algebra_.num_blocks(); ++b) {
    int n = algebra_.block_dims[static_cast<size_t>(b)];
    Mat& r = rho_[static_cast<size_t>(b)];
    if (r.rows() != n || r.cols() != n)
      throw Error(ErrorKind::structural, "density block has wrong shape");
    if ((r - r.adjoint()).norm() > 1e-10 * std::max(1.0, r.norm()))
      throw Error(ErrorKind::validation, "density block is not Hermitian");
    r = 0.5 * (r + r.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<Mat> es(r);
    min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
    max_eig = std::max(max_eig, es.eigenvalues().maxCoeff());
    trace += r.trace().real();
  }
  if (min_eig < -psd_tol * std::max(1.0, max_eig))
    throw Error(ErrorKind::validation,
                "density matrix has a negative eigenvalue: " + std::to_string(min_eig));
  if (std::abs(trace - 1.0) > 1e-8)
    throw Error(ErrorKind::validation,
                "state has total trace " + std::to_string(trace) + ", expected 1");
  for (Mat& r : rho_) r /= trace;
}

NormalState NormalState::maximally_mixed(const BlockAlgebra& a) {
  std::vector<Mat> rho;
  double d = a.embed_dim();
  for (int n : a.block_dims) rho.push_back(Mat::Identity(n, n) / d);
  return NormalState(a, std::move(rho));
}

Complex NormalState::value(const AlgebraElement& x) const {
  if (!(x.algebra() == algebra_))
    throw Error(ErrorKind::structural, "element of a different algebra");
  Complex s = 0;
  for (int b = 0; b < algebra_.num_blocks(); ++b)
    s += (rho_[static_cast<size_t>(b)] * x.block(b)).trace();
  return s;
}

AlgebraElement NormalState::as_element() const {
  return AlgebraElement(algebra_, rho_);
}

bool NormalState::faithful(double tol) const {
  for (const Mat& r : rho_) {
    Eigen::SelfAdjointEigenSolver<Mat> es(r);
    double lo = es.eigenvalues().minCoeff();
    double hi = es.eigenvalues().maxCoeff();
    if (!(lo > tol * hi)) return false;
  }
  return true;
}

double NormalState::min_eigenvalue() const {
  double lo = std::numeric_limits<double>::infinity();
  for (const Mat& r : rho_) {
    Eigen::SelfAdjointEigenSolver<Mat> es(r);
    lo = std::min(lo, es.eigenvalues().minCoeff());
  }
  return lo;
}

Complex inner_phi(const NormalState& phi, const AlgebraElement& x,
                  const AlgebraElement& y) {
  return phi.value(mul(y.adjoint(), x));
}

double norm_phi(const NormalState& phi, const AlgebraElement& x) {
  double v = inner_phi(phi, x, x).real();
  return std::sqrt(std::max(0.0, v));
}

std::vector<AlgebraElement> orthonormal_basis(const BlockAlgebra& a,
                                              const NormalState& phi) {
  if (!phi.faithful())
    throw Error(ErrorKind::validation,
                "state is not faithful; compress with support_projection first");
  const int n_total = a.coord_dim();
  std::vector<AlgebraElement> candidates;
  candidates.push_back(AlgebraElement::identity(a));
  for (int b = 0; b < a.num_blocks(); ++b) {
    int n = a.block_dims[static_cast<size_t>(b)];
    for (int c = 0; c < n; ++c)
      for (int r = 0; r < n; ++r) {
        AlgebraElement e = AlgebraElement::zero(a);
        e.block(b)(r, c) = 1.0;
        candidates.push_back(std::move(e));
      }
  }

  // modified Gram-Schmidt with one reorthogonalization pass
  std::vector<AlgebraElement> basis;
  for (const AlgebraElement& cand : candidates) {
    double orig = norm_phi(phi, cand);
    AlgebraElement v = cand;
    for (int pass = 0; pass < 2; ++pass)
      for (const AlgebraElement& b : basis)
        v = v - b * inner_phi(phi, v, b);
    double nv = norm_phi(phi, v);
    if (nv <= 1e-10 * std::max(orig, 1e-30)) continue;  // dependent, skip
    basis.push_back(v * Complex(1.0 / nv, 0.0));
    if (static_cast<int>(basis.size()) == n_total) break;
  }
  if (static_cast<int>(basis.size()) != n_total)
    throw Error(ErrorKind::numeric, "orthonormalization lost rank");
  return basis;
}

//=========================================================================
// StateFamily
//=========================================================================

StateFamily StateFamily::single(NormalState s) {
  StateFamily f;
  f.states.push_back(std::move(s));
  return f;
}

bool StateFamily::jointly_faithful(double tol) const {
  if (states.empty()) return false;
  const BlockAlgebra& a = states.front().algebra();
  // the supremum of the supports is the unit iff the summed densities
  // are positive definite on every block
  for (int b = 0; b < a.num_blocks(); ++b) {
    int n = a.block_dims[static_cast<size_t>(b)];
    Mat sum = Mat::Zero(n, n);
    for (const NormalState& s : states) sum += s.rho(b);
    Eigen::SelfAdjointEigenSolver<Mat> es(sum);
    if (!(es.eigenvalues().minCoeff() > tol * es.eigenvalues().maxCoeff()))
      return false;
  }
  return true;
}

NormalState StateFamily::mixture() const {
  if (states.empty())
    throw Error(ErrorKind::validation, "empty state family");
  const BlockAlgebra& a = states.front().algebra();
  std::vector<Mat> rho;
  for (int b = 0; b < a.num_blocks(); ++b) {
    int n = a.block_dims[static_cast<size_t>(b)];
    Mat sum = Mat::Zero(n, n);
    for (const NormalState& s : states) sum += s.rho(b);
    rho.push_back(sum / static_cast<double>(states.size()));
  }
  return NormalState(a, std::move(rho));
}

//=========================================================================
// PhiGeometry
//=========================================================================

namespace {

Mat hermitian_power(const Mat& h, double p) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  Eigen::VectorXd vals = es.eigenvalues();
  Eigen::VectorXd powered(vals.size());
  for (int i = 0; i < vals.size(); ++i) {
    double v = std::max(vals(i), 0.0);
    powered(i) = (v == 0.0 && p < 0) ? 0.0 : std::pow(v, p);
  }
  return es.eigenvectors() * powered.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

PhiGeometry::PhiGeometry(BlockAlgebra algebra, NormalState phi)
    : algebra_(std::move(algebra)), phi_(std::move(phi)) {
  if (!phi_.faithful())
    throw Error(ErrorKind::validation, "PhiGeometry requires a faithful state");
  int nc = algebra_.coord_dim();
  gram_ = Mat::Zero(nc, nc);
  gram_sqrt_ = Mat::Zero(nc, nc);
  gram_isqrt_ = Mat::Zero(nc, nc);
  for (int b = 0; b < algebra_.num_blocks(); ++b) {
    int n = algebra_.block_dims[static_cast<size_t>(b)];
    int off = algebra_.coord_offset(b);
    // tr(rho y^dag x) = vec(y)^dag (rho^T (x) I) vec(x) for column-major vec
    Mat rt = phi_.rho(b).transpose();
    Mat rt_sqrt = hermitian_power(rt, 0.5);
    Mat rt_isqrt = hermitian_power(rt, -0.5);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        gram_.block(off + i * n, off + j * n, n, n) =
            rt(i, j) * Mat::Identity(n, n);
        gram_sqrt_.block(off + i * n, off + j * n, n, n) =
            rt_sqrt(i, j) * Mat::Identity(n, n);
        gram_isqrt_.block(off + i * n, off + j * n, n, n) =
            rt_isqrt(i, j) * Mat::Identity(n, n);
      }
  }
}

Complex PhiGeometry::coords_inner(const Vec& x, const Vec& y) const {
  return (y.adjoint() * (gram_ * x))(0, 0);
}

double PhiGeometry::coords_norm(const Vec& x) const {
  return std::sqrt(std::max(0.0, coords_inner(x, x).real()));
}

Mat PhiGeometry::superop_adjoint(const Mat& superop) const {
  return gram_isqrt_ * gram_isqrt_ * superop.adjoint() * gram_;
}

double PhiGeometry::superop_norm(const Mat& superop) const {
  Mat m = gram_sqrt_ * superop * gram_isqrt_;
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

//=========================================================================
// Rng
//=========================================================================

std::uint64_t Rng::next_u64() {
  // splitmix64; stable across platforms
  state_ += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  if (normal_spare_) {
    double v = *normal_spare_;
    normal_spare_.reset();
    return v;
  }
  double u1 = 0;
  do { u1 = uniform(); } while (u1 <= 0);
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  normal_spare_ = r * std::sin(2.0 * M_PI * u2);
  return r * std::cos(2.0 * M_PI * u2);
}

Complex Rng::normal_complex() {
  double re = normal();
  double im = normal();
  return Complex(re, im) / std::sqrt(2.0);
}

Mat Rng::ginibre(int rows, int cols) {
  Mat m(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) m(r, c) = normal_complex();
  return m;
}

Mat Rng::random_unitary(int n) {
  Mat g = ginibre(n, n);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  // fix the phase convention so the result depends only on the stream
  for (int i = 0; i < n; ++i) {
    Complex d = r(i, i);
    double a = std::abs(d);
    q.col(i) *= (a > 0) ? d / a : Complex(1, 0);
  }
  return q;
}

Mat Rng::random_hermitian(int n) {
  Mat g = ginibre(n, n);
  return 0.5 * (g + g.adjoint().eval());
}

Mat Rng::random_density(int n) {
  Mat g = ginibre(n, n);
  Mat d = g * g.adjoint();
  return d / d.trace().real();
}

AlgebraElement Rng::random_element(const BlockAlgebra& a) {
  std::vector<Mat> blocks;
  for (int n : a.block_dims) blocks.push_back(ginibre(n, n));
  return AlgebraElement(a, std::move(blocks));
}

AlgebraElement Rng::random_hermitian_element(const BlockAlgebra& a) {
  std::vector<Mat> blocks;
  for (int n : a.block_dims) blocks.push_back(random_hermitian(n));
  return AlgebraElement(a, std::move(blocks));
}

AlgebraElement Rng::random_psd_element(const BlockAlgebra& a) {
  std::vector<Mat> blocks;
  for (int n : a.block_dims) {
    Mat g = ginibre(n, n);
    blocks.push_back(g * g.adjoint());
  }
  return AlgebraElement(a, std::move(blocks));
}

NormalState Rng::random_state(const BlockAlgebra& a) {
  std::vector<Mat> rho;
  double total = 0;
  for (int n : a.block_dims) {
    Mat g = ginibre(n, n);
    Mat d = g * g.adjoint();
    total += d.trace().real();
    rho.push_back(std::move(d));
  }
  for (Mat& r : rho) r /= total;
  return NormalState(a, std::move(rho));
}

}  // namespace jdlg
