#include "jdlg/channel.hpp"

#include <cmath>

namespace jdlg {

AlgebraElement ChannelMap::apply(const AlgebraElement& x) const {
  if (!(x.algebra() == algebra))
    throw Error(ErrorKind::structural, "element of a different algebra");
  return AlgebraElement::from_coords(algebra, superop * x.coords());
}

Mat ChannelMap::power(int n) const {
  int nc = algebra.coord_dim();
  Mat acc = Mat::Identity(nc, nc);
  Mat base = superop;
  while (n > 0) {
    if (n & 1) acc = acc * base;
    base = base * base;
    n >>= 1;
  }
  return acc;
}

ChannelMap channel_from_superop(BlockAlgebra a, Mat superop, std::string name) {
  int nc = a.coord_dim();
  if (superop.rows() != nc || superop.cols() != nc)
    throw Error(ErrorKind::structural, "superoperator has wrong shape");
  return ChannelMap{std::move(a), std::move(superop), std::nullopt, std::nullopt,
                    std::move(name)};
}

ChannelMap identity_channel(const BlockAlgebra& a) {
  ChannelMap t = channel_from_superop(a, Mat::Identity(a.coord_dim(), a.coord_dim()),
                                      "identity");
  t.kraus = std::vector<Mat>{Mat::Identity(a.embed_dim(), a.embed_dim())};
  return t;
}

ChannelMap from_kraus(const BlockAlgebra& a, std::vector<Mat> kraus,
                      std::string name) {
  int d = a.embed_dim();
  if (kraus.empty())
    throw Error(ErrorKind::structural, "empty Kraus set");
  for (const Mat& k : kraus)
    if (k.rows() != d || k.cols() != d)
      throw Error(ErrorKind::structural,
                  "Kraus operator has shape " + std::to_string(k.rows()) + "x" +
                      std::to_string(k.cols()) + ", expected " + std::to_string(d) +
                      "x" + std::to_string(d));

  int nc = a.coord_dim();
  Mat superop(nc, nc);
  for (int col = 0; col < nc; ++col) {
    Vec e = Vec::Zero(nc);
    e(col) = 1.0;
    Mat x = AlgebraElement::from_coords(a, e).embedded();
    Mat y = Mat::Zero(d, d);
    for (const Mat& k : kraus) y += k * x * k.adjoint();
    superop.col(col) = compress_embedded(a, y).coords();
  }
  ChannelMap t = channel_from_superop(a, std::move(superop), std::move(name));
  t.kraus = std::move(kraus);
  return t;
}

Mat to_choi(const ChannelMap& t) {
  if (t.algebra.num_blocks() != 1)
    throw Error(ErrorKind::unsupported,
                "Choi representation is only supported for a single matrix block");
  int n = t.algebra.block_dims[0];
  Mat choi = Mat::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      AlgebraElement e = AlgebraElement::zero(t.algebra);
      e.block(0)(i, j) = 1.0;
      Mat img = t.apply(e).block(0);
      choi.block(i * n, j * n, n, n) = img;
    }
  return choi;
}

ChannelMap from_choi(const BlockAlgebra& a, const Mat& choi, std::string name) {
  if (a.num_blocks() != 1)
    throw Error(ErrorKind::unsupported,
                "Choi representation is only supported for a single matrix block");
  int n = a.block_dims[0];
  if (choi.rows() != n * n || choi.cols() != n * n)
    throw Error(ErrorKind::structural, "Choi matrix has wrong shape");
  int nc = a.coord_dim();
  Mat superop(nc, nc);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      // E_ij sits at coordinate j*n + i
      Mat img = choi.block(i * n, j * n, n, n);
      AlgebraElement y(a, {img});
      superop.col(j * n + i) = y.coords();
    }
  ChannelMap t = channel_from_superop(a, std::move(superop), std::move(name));
  t.choi = choi;
  return t;
}

CpDiagnostic is_completely_positive(const ChannelMap& t, double tol) {
  CpDiagnostic diag;
  diag.min_choi_eigenvalue = std::numeric_limits<double>::infinity();
  const BlockAlgebra& a = t.algebra;
  for (int bi = 0; bi < a.num_blocks(); ++bi) {
    int ni = a.block_dims[static_cast<size_t>(bi)];
    for (int bj = 0; bj < a.num_blocks(); ++bj) {
      int nj = a.block_dims[static_cast<size_t>(bj)];
      Mat choi = Mat::Zero(nj * ni, nj * ni);
      for (int p = 0; p < nj; ++p)
        for (int q = 0; q < nj; ++q) {
          AlgebraElement e = AlgebraElement::zero(a);
          e.block(bj)(p, q) = 1.0;
          Mat img = t.apply(e).block(bi);
          choi.block(p * ni, q * ni, ni, ni) = img;
        }
      diag.hermiticity_residual =
          std::max(diag.hermiticity_residual, (choi - choi.adjoint()).norm());
      Mat h = 0.5 * (choi + choi.adjoint());
      Eigen::SelfAdjointEigenSolver<Mat> es(h);
      diag.min_choi_eigenvalue =
          std::min(diag.min_choi_eigenvalue, es.eigenvalues().minCoeff());
    }
  }
  diag.completely_positive = diag.min_choi_eigenvalue >= -tol &&
                             diag.hermiticity_residual <= tol * 10;
  return diag;
}

bool is_unital(const ChannelMap& t, double tol) {
  AlgebraElement one = AlgebraElement::identity(t.algebra);
  return (t.apply(one) - one).frobenius_norm() <= tol;
}

ChannelMap preadjoint(const ChannelMap& t) {
  ChannelMap s = channel_from_superop(t.algebra, t.superop.adjoint(),
                                      t.name.empty() ? "" : t.name + "_*");
  if (t.kraus) {
    std::vector<Mat> k;
    for (const Mat& m : *t.kraus) k.push_back(m.adjoint());
    s.kraus = std::move(k);
  }
  return s;
}

ChannelMap compose(const ChannelMap& t1, const ChannelMap& t2) {
  if (!(t1.algebra == t2.algebra))
    throw Error(ErrorKind::structural, "composition across different algebras");
  ChannelMap t = channel_from_superop(t1.algebra, t1.superop * t2.superop);
  if (t1.kraus && t2.kraus) {
    std::vector<Mat> k;
    for (const Mat& a : *t1.kraus)
      for (const Mat& b : *t2.kraus) k.push_back(a * b);
    t.kraus = std::move(k);
  }
  return t;
}

namespace {

// Spectral projection of m onto the eigenvalue cluster within tol of
// lambda. Errors if the cluster is defective beyond residual_tol.
Mat eigen_cluster_projection(const Mat& m, Complex lambda, double tol,
                             double residual_tol = 1e-8) {
  Eigen::ComplexEigenSolver<Mat> es(m);
  if (es.info() != Eigen::Success)
    throw Error(ErrorKind::numeric, "eigensolver failed");
  int n = static_cast<int>(m.rows());
  Vec vals = es.eigenvalues();
  Mat vecs = es.eigenvectors();
  Eigen::VectorXcd sel = Eigen::VectorXcd::Zero(n);
  bool any = false;
  for (int i = 0; i < n; ++i)
    if (std::abs(vals(i) - lambda) <= tol) {
      sel(i) = 1.0;
      any = true;
    }
  if (!any)
    throw Error(ErrorKind::validation, "no eigenvalue within tolerance");
  Mat proj = vecs * sel.asDiagonal() * vecs.inverse();
  double res = (m * proj - lambda * proj).norm();
  if (!proj.allFinite() || res > residual_tol * std::max(1.0, m.norm()))
    throw Error(ErrorKind::numeric,
                "eigenvalue cluster is defective or ill-conditioned");
  return proj;
}

}  // namespace

InvariantStateResult find_invariant_state(const ChannelMap& t, double tol) {
  const BlockAlgebra& a = t.algebra;
  Mat pre = t.superop.adjoint();
  Mat q;
  try {
    q = eigen_cluster_projection(pre, Complex(1, 0), std::max(tol, 1e-9));
  } catch (const Error& e) {
    throw Error(ErrorKind::validation,
                std::string("no invariant state within tolerance: ") + e.what());
  }

  // fixed state of maximal support: project the maximally mixed state
  Vec mixed = AlgebraElement::identity(a).coords() / a.embed_dim();
  AlgebraElement fixed = AlgebraElement::from_coords(a, q * mixed);

  std::vector<Mat> rho;
  double trace = 0;
  double min_eig = 0;
  for (int b = 0; b < a.num_blocks(); ++b) {
    Mat r = 0.5 * (fixed.block(b) + fixed.block(b).adjoint().eval());
    Eigen::SelfAdjointEigenSolver<Mat> es(r);
    min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
    // clip solver jitter below zero
    Mat clipped = es.eigenvectors() *
                  es.eigenvalues().cwiseMax(0.0).asDiagonal().toDenseMatrix().cast<Complex>() *
                  es.eigenvectors().adjoint();
    trace += clipped.trace().real();
    rho.push_back(std::move(clipped));
  }
  if (min_eig < -1e-8 || trace <= 1e-10)
    throw Error(ErrorKind::validation,
                "averaged fixed point is not a positive state");
  for (Mat& r : rho) r /= trace;

  InvariantStateResult result{NormalState(a, std::move(rho)), false, 0, 0.0};
  result.faithful = result.state.faithful();

  // residual of the fixed-point equation
  Vec v = result.state.as_element().coords();
  result.residual = (pre * v - v).norm();
  if (result.residual > 1e-7)
    throw Error(ErrorKind::numeric, "fixed state residual too large: " +
                                        std::to_string(result.residual));

  // geometric multiplicity of eigenvalue one in the preadjoint
  Mat shifted = pre - Mat::Identity(pre.rows(), pre.cols());
  Eigen::JacobiSVD<Mat> svd(shifted);
  double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 1e-9 * std::max(1.0, smax)) ++rank;
  result.fixed_space_dim = static_cast<int>(pre.rows()) - rank;
  return result;
}

InvarianceDiagnostic check_invariance(const ChannelMap& t, const NormalState& phi,
                                      double tol) {
  ChannelMap pre = preadjoint(t);
  AlgebraElement moved = pre.apply(phi.as_element());
  InvarianceDiagnostic diag;
  for (int b = 0; b < t.algebra.num_blocks(); ++b) {
    double r = (moved.block(b) - phi.rho(b)).norm();
    diag.block_residuals.push_back(r);
    diag.max_residual = std::max(diag.max_residual, r);
  }
  diag.within_tolerance = diag.max_residual <= tol;
  return diag;
}

double schwarz_defect_min_eig(const ChannelMap& t, const AlgebraElement& x) {
  AlgebraElement lhs = t.apply(mul(x.adjoint(), x));
  AlgebraElement tx = t.apply(x);
  AlgebraElement rhs = mul(tx.adjoint(), tx);
  AlgebraElement diff = lhs - rhs;
  double lo = std::numeric_limits<double>::infinity();
  for (int b = 0; b < t.algebra.num_blocks(); ++b) {
    Mat h = 0.5 * (diff.block(b) + diff.block(b).adjoint().eval());
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    lo = std::min(lo, es.eigenvalues().minCoeff());
  }
  return lo;
}

SemigroupSpec make_semigroup(std::vector<ChannelMap> generators, double tol) {
  if (generators.empty())
    throw Error(ErrorKind::structural, "empty generator list");
  for (size_t i = 1; i < generators.size(); ++i)
    if (!(generators[i].algebra == generators[0].algebra))
      throw Error(ErrorKind::structural, "generators act on different algebras");
  for (size_t i = 0; i < generators.size(); ++i)
    for (size_t j = i + 1; j < generators.size(); ++j) {
      double c = (generators[i].superop * generators[j].superop -
                  generators[j].superop * generators[i].superop)
                     .norm();
      double scale = std::max(1.0, generators[i].superop.norm() *
                                       generators[j].superop.norm());
      if (c > tol * scale)
        throw Error(ErrorKind::unsupported,
                    "generators " + std::to_string(i) + " and " + std::to_string(j) +
                        " do not commute (commutator norm " + std::to_string(c) +
                        "); only commuting families are supported");
    }
  bool multi = generators.size() > 1;
  return SemigroupSpec{std::move(generators), multi};
}

}  // namespace jdlg
