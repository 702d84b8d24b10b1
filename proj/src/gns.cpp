#include "jdlg/gns.hpp"

#include <cmath>

#include "jdlg/numeric.hpp"

namespace jdlg {

SupportSplit support_projection(const BlockAlgebra& a, const NormalState& phi) {
  std::vector<Mat> proj_blocks;
  std::vector<AlgebraElement> k_basis, l_basis;
  for (int b = 0; b < a.num_blocks(); ++b) {
    int n = a.block_dims[static_cast<size_t>(b)];
    Eigen::SelfAdjointEigenSolver<Mat> es(phi.rho(b));
    Eigen::VectorXd vals = es.eigenvalues();
    double thr = 1e-12 * std::max(vals.maxCoeff(), 0.0);

    // order support vectors by descending eigenvalue
    std::vector<int> support_idx, kernel_idx;
    for (int i = n - 1; i >= 0; --i)
      (vals(i) > thr ? support_idx : kernel_idx).push_back(i);

    Mat p = Mat::Zero(n, n);
    for (int c : support_idx)
      p += es.eigenvectors().col(c) * es.eigenvectors().col(c).adjoint();
    proj_blocks.push_back(p);

    for (int c : support_idx) {
      double scale = 1.0 / std::sqrt(vals(c));
      for (int r = 0; r < n; ++r) {
        AlgebraElement e = AlgebraElement::zero(a);
        e.block(b) = scale * Mat::Identity(n, n).col(r) *
                     es.eigenvectors().col(c).adjoint();
        k_basis.push_back(std::move(e));
      }
    }
    for (int c : kernel_idx)
      for (int r = 0; r < n; ++r) {
        AlgebraElement e = AlgebraElement::zero(a);
        e.block(b) =
            Mat::Identity(n, n).col(r) * es.eigenvectors().col(c).adjoint();
        l_basis.push_back(std::move(e));
      }
  }
  return SupportSplit{AlgebraElement(a, std::move(proj_blocks)),
                      std::move(k_basis), std::move(l_basis)};
}

double GnsOperator::spectral_norm() const {
  if (matrix.rows() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(matrix);
  return svd.singularValues()(0);
}

namespace {

GnsOperator build_gns(const ChannelMap& t, const NormalState& phi,
                      std::vector<AlgebraElement> basis) {
  int m = static_cast<int>(basis.size());
  Mat g(m, m);
  for (int j = 0; j < m; ++j) {
    AlgebraElement img = t.apply(basis[static_cast<size_t>(j)]);
    for (int i = 0; i < m; ++i)
      g(i, j) = inner_phi(phi, img, basis[static_cast<size_t>(i)]);
  }
  return GnsOperator{std::move(g), std::move(basis)};
}

}  // namespace

GnsOperator gns_matrix(const ChannelMap& t, const NormalState& phi,
                       double invariance_tol) {
  if (!(t.algebra == phi.algebra()))
    throw Error(ErrorKind::structural, "state on a different algebra");
  if (phi.faithful())
    return build_gns(t, phi, orthonormal_basis(t.algebra, phi));

  SupportSplit split = support_projection(t.algebra, phi);
  for (const AlgebraElement& l : split.l_basis) {
    double moved = norm_phi(phi, t.apply(l));
    if (moved > invariance_tol * std::max(1.0, l.frobenius_norm()))
      throw Error(ErrorKind::hypothesis,
                  "T does not leave the seminorm kernel L_phi invariant "
                  "(||T l||_phi = " +
                      std::to_string(moved) +
                      "); the contraction hypothesis fails for this state");
  }
  return build_gns(t, phi, split.k_basis);
}

GnsOperator gns_matrix_in_basis(const ChannelMap& t, const NormalState& phi,
                                const std::vector<AlgebraElement>& onb) {
  for (size_t i = 0; i < onb.size(); ++i)
    for (size_t j = 0; j <= i; ++j) {
      Complex g = inner_phi(phi, onb[i], onb[j]);
      double want = (i == j) ? 1.0 : 0.0;
      if (std::abs(g - want) > 1e-8)
        throw Error(ErrorKind::validation, "basis is not phi-orthonormal");
    }
  return build_gns(t, phi, onb);
}

HypothesisDiagnostic verify_hypothesis(const ChannelMap& t,
                                       const StateFamily& family, double tol) {
  HypothesisDiagnostic diag;
  if (family.states.empty()) {
    diag.failure = "empty state family";
    return diag;
  }
  diag.pass = true;
  for (size_t i = 0; i < family.states.size(); ++i) {
    double norm;
    try {
      norm = gns_matrix(t, family.states[i], tol).spectral_norm();
    } catch (const Error& e) {
      diag.pass = false;
      diag.failure = e.what();
      return diag;
    }
    diag.norms.push_back(norm);
    if (norm > 1.0 + tol) {
      diag.pass = false;
      diag.failure = "GNS operator norm " + std::to_string(norm) +
                     " exceeds 1 for state " + std::to_string(i);
    } else if (norm > 1.0) {
      diag.warnings.push_back("norm " + std::to_string(norm) + " for state " +
                              std::to_string(i) + " clamped to PASS");
    }
  }
  return diag;
}

namespace {

std::vector<Complex> peripheral_of(const Mat& m, double tol) {
  Eigen::ComplexEigenSolver<Mat> es(m);
  if (es.info() != Eigen::Success)
    throw Error(ErrorKind::numeric, "eigensolver failed");
  std::vector<Complex> all(es.eigenvalues().data(),
                           es.eigenvalues().data() + es.eigenvalues().size());
  std::vector<Complex> peripheral;
  for (Complex v : all)
    if (std::abs(v) >= 1.0 - tol) peripheral.push_back(v);
  std::vector<int> perm = eigenvalue_sort_permutation(peripheral);
  std::vector<Complex> sorted;
  for (int i : perm) sorted.push_back(peripheral[static_cast<size_t>(i)]);
  return sorted;
}

}  // namespace

PeripheralComparison compare_peripheral_spectra(const ChannelMap& t,
                                                const NormalState& phi,
                                                double peripheral_tol,
                                                double match_tol) {
  if (!phi.faithful())
    throw Error(ErrorKind::validation,
                "peripheral comparison needs a faithful invariant state");
  HypothesisDiagnostic hyp = verify_hypothesis(t, StateFamily::single(phi));
  if (!hyp.pass)
    throw Error(ErrorKind::hypothesis,
                "refusing peripheral comparison, hypothesis fails: " + hyp.failure);

  PeripheralComparison cmp;
  cmp.on_algebra = peripheral_of(t.superop, peripheral_tol);
  cmp.on_predual = peripheral_of(t.superop.adjoint(), peripheral_tol);
  cmp.on_gns = peripheral_of(gns_matrix(t, phi).matrix, peripheral_tol);

  MatchResult ap = match_multisets(cmp.on_algebra, cmp.on_predual, match_tol);
  MatchResult ag = match_multisets(cmp.on_algebra, cmp.on_gns, match_tol);
  cmp.algebra_predual_pairs = ap.pairs;
  cmp.algebra_gns_pairs = ag.pairs;
  cmp.max_match_distance = std::max(ap.max_distance, ag.max_distance);
  cmp.equal = ap.matched && ag.matched;
  return cmp;
}

}  // namespace jdlg
