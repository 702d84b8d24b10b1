#include "jdlg/decomposition.hpp"

#include <cmath>

#include "jdlg/numeric.hpp"

namespace jdlg {

SpectralData eigendecompose(const ChannelMap& t, double eps_peripheral) {
  Eigen::ComplexEigenSolver<Mat> es(t.superop);
  if (es.info() != Eigen::Success)
    throw Error(ErrorKind::numeric, "eigensolver failed on the superoperator");
  int n = static_cast<int>(t.superop.rows());

  std::vector<Complex> vals(es.eigenvalues().data(), es.eigenvalues().data() + n);
  std::vector<int> perm = eigenvalue_sort_permutation(vals);

  SpectralData data;
  data.right_vectors = Mat(n, n);
  for (int k = 0; k < n; ++k) {
    int src = perm[static_cast<size_t>(k)];
    data.eigenvalues.push_back(vals[static_cast<size_t>(src)]);
    data.right_vectors.col(k) = es.eigenvectors().col(src);
  }

  double scale = std::max(1.0, t.superop.norm());
  for (int k = 0; k < n; ++k) {
    double res = (t.superop * data.right_vectors.col(k) -
                  data.eigenvalues[static_cast<size_t>(k)] * data.right_vectors.col(k))
                     .norm();
    if (res > 1e-8 * scale)
      throw Error(ErrorKind::numeric,
                  "eigenpair residual " + std::to_string(res) +
                      " too large; matrix may be badly conditioned");
  }

  for (int k = 0; k < n; ++k) {
    double m = std::abs(data.eigenvalues[static_cast<size_t>(k)]);
    if (m >= 1.0 - eps_peripheral) {
      data.peripheral.push_back(k);
    } else {
      data.stable_radius = std::max(data.stable_radius, m);
      if (m > 1.0 - 1e-6)
        data.warnings.push_back(
            "eigenvalue with modulus " + std::to_string(m) +
            " lies in the near-peripheral band (1 - 1e-6, 1 - eps)");
    }
  }

  // Jordan defects on peripheral clusters: rank(T - lambda) vs
  // rank((T - lambda)^2)
  std::vector<bool> visited(static_cast<size_t>(n), false);
  for (size_t a = 0; a < data.peripheral.size(); ++a) {
    int i = data.peripheral[a];
    if (visited[static_cast<size_t>(i)]) continue;
    std::vector<int> cluster{i};
    visited[static_cast<size_t>(i)] = true;
    for (size_t b = a + 1; b < data.peripheral.size(); ++b) {
      int j = data.peripheral[b];
      if (!visited[static_cast<size_t>(j)] &&
          std::abs(data.eigenvalues[static_cast<size_t>(i)] -
                   data.eigenvalues[static_cast<size_t>(j)]) <= 1e-8) {
        cluster.push_back(j);
        visited[static_cast<size_t>(j)] = true;
      }
    }
    Complex lambda = 0;
    for (int k : cluster) lambda += data.eigenvalues[static_cast<size_t>(k)];
    lambda /= static_cast<double>(cluster.size());
    Mat shifted = t.superop - lambda * Mat::Identity(n, n);
    int r1 = svd_rank(shifted);
    int r2 = svd_rank(shifted * shifted);
    if (r2 < r1)
      for (int k : cluster) data.defective_peripheral.push_back(k);
  }
  return data;
}

double stable_radius(const SpectralData& data) { return data.stable_radius; }

namespace {

// phi-Gram-Schmidt of coordinate vectors; drops candidates whose residual
// falls below drop_tol times the given scale (per candidate).
std::vector<Vec> phi_gram_schmidt(const PhiGeometry& geom,
                                  const std::vector<Vec>& candidates,
                                  const std::vector<double>& scales,
                                  double drop_tol) {
  std::vector<Vec> basis;
  for (size_t i = 0; i < candidates.size(); ++i) {
    Vec v = candidates[i];
    for (int pass = 0; pass < 2; ++pass)
      for (const Vec& b : basis) v -= b * geom.coords_inner(v, b);
    double nv = geom.coords_norm(v);
    if (nv <= drop_tol * std::max(scales[i], 1e-30)) continue;
    basis.push_back(v / nv);
  }
  return basis;
}

}  // namespace

JdlgSplit jdlg_split(const ChannelMap& t, const NormalState& phi,
                     double eps_peripheral, double faithful_tol) {
  if (!phi.faithful(faithful_tol))
    throw Error(ErrorKind::validation,
                "jdlg_split needs a faithful state; compress with "
                "support_projection first");
  HypothesisDiagnostic hyp = verify_hypothesis(t, StateFamily::single(phi));
  if (!hyp.pass)
    throw Error(ErrorKind::hypothesis,
                "refusing to split, hypothesis fails: " + hyp.failure);

  SpectralData sd = eigendecompose(t, eps_peripheral);
  if (!sd.defective_peripheral.empty())
    throw Error(ErrorKind::numeric,
                "defective peripheral eigenvalue under a passing hypothesis; "
                "internal inconsistency");

  PhiGeometry geom(t.algebra, phi);
  int n = t.algebra.coord_dim();

  // phi-orthonormalize the peripheral eigenvectors (clusters are adjacent
  // after the canonical sort, so same-cluster vectors are orthonormalized
  // jointly; only the subspace is promised)
  std::vector<Vec> peripheral_vecs;
  std::vector<double> peripheral_scales;
  for (int k : sd.peripheral) {
    peripheral_vecs.push_back(sd.right_vectors.col(k));
    peripheral_scales.push_back(geom.coords_norm(peripheral_vecs.back()));
  }
  std::vector<Vec> r_basis =
      phi_gram_schmidt(geom, peripheral_vecs, peripheral_scales, 1e-8);
  if (r_basis.size() != sd.peripheral.size())
    throw Error(ErrorKind::numeric,
                "peripheral eigenvectors are numerically dependent");
  int m = static_cast<int>(r_basis.size());

  // P = R R^dag G projects onto span(r_basis) orthogonally in phi
  Mat r_mat(n, m);
  for (int k = 0; k < m; ++k) r_mat.col(k) = r_basis[static_cast<size_t>(k)];
  Mat projection = r_mat * r_mat.adjoint() * geom.gram();

  // phi-symmetrize and re-verify
  Mat sym = 0.5 * (projection + geom.superop_adjoint(projection));
  JdlgSplit split;
  split.symmetrization_move = (sym - projection).norm();
  if (split.symmetrization_move > 1e-6)
    throw Error(ErrorKind::numeric,
                "phi-symmetrization moved P by " +
                    std::to_string(split.symmetrization_move) +
                    "; peripheral subspace is not phi-orthogonal to its complement");
  projection = sym;
  split.idempotency_residual = (projection * projection - projection).norm();
  if (split.idempotency_residual > 1e-9 * std::max(1.0, projection.norm()))
    throw Error(ErrorKind::numeric, "projection lost idempotency: residual " +
                                        std::to_string(split.idempotency_residual));
  split.phi_symmetry_residual =
      (projection - geom.superop_adjoint(projection)).norm();
  split.commutation_residual =
      (projection * t.superop - t.superop * projection).norm();

  // stable part: phi-orthogonal complement through I - P; candidates are
  // measured against the norm of the unprojected coordinate unit, so a
  // direction inside ran P drops out
  std::vector<Vec> s_candidates;
  std::vector<double> s_scales;
  for (int k = 0; k < n; ++k) {
    Vec e = Vec::Zero(n);
    e(k) = 1.0;
    s_candidates.push_back(e - projection * e);
    s_scales.push_back(geom.coords_norm(e));
  }
  std::vector<Vec> s_basis = phi_gram_schmidt(geom, s_candidates, s_scales, 1e-7);
  if (static_cast<int>(s_basis.size()) != n - m)
    throw Error(ErrorKind::numeric,
                "stable complement has wrong dimension: " +
                    std::to_string(s_basis.size()) + " vs " + std::to_string(n - m));

  split.projection = std::move(projection);
  for (const Vec& v : r_basis)
    split.reversible_basis.push_back(AlgebraElement::from_coords(t.algebra, v));
  for (const Vec& v : s_basis)
    split.stable_basis.push_back(AlgebraElement::from_coords(t.algebra, v));
  split.stable_radius = sd.stable_radius;

  for (const std::vector<Vec>* basis : {&r_basis, &s_basis})
    for (size_t i = 0; i < basis->size(); ++i)
      for (size_t j = 0; j <= i; ++j) {
        Complex g = geom.coords_inner((*basis)[i], (*basis)[j]);
        double want = i == j ? 1.0 : 0.0;
        split.basis_orthonormality =
            std::max(split.basis_orthonormality, std::abs(g - want));
      }

  // T restricted to A_r is a phi-isometry, hence has condition number 1
  if (m > 0) {
    Mat restricted(m, m);
    for (int j = 0; j < m; ++j) {
      Vec img = t.superop * r_mat.col(j);
      for (int i = 0; i < m; ++i)
        restricted(i, j) = geom.coords_inner(img, r_mat.col(i));
    }
    Eigen::JacobiSVD<Mat> svd(restricted);
    double smin = svd.singularValues()(m - 1);
    double smax = svd.singularValues()(0);
    split.restricted_condition =
        smin > 0 ? smax / smin : std::numeric_limits<double>::infinity();
  }
  return split;
}

Mat averaging_projection_oracle(const ChannelMap& t, Complex lambda, int n_iter) {
  if (std::abs(std::abs(lambda) - 1.0) > 1e-12)
    throw Error(ErrorKind::validation, "oracle eigenvalue must be unimodular");
  return peripheral_projection_oracle(t, {lambda}, n_iter);
}

Mat peripheral_projection_oracle(const ChannelMap& t,
                                 const std::vector<Complex>& lambdas, int n_iter) {
  if (n_iter < 1)
    throw Error(ErrorKind::validation, "oracle needs at least one iteration");
  for (Complex l : lambdas)
    if (std::abs(std::abs(l) - 1.0) > 1e-12)
      throw Error(ErrorKind::validation, "oracle eigenvalue must be unimodular");

  int n = t.algebra.coord_dim();
  std::vector<double> thetas;
  for (Complex l : lambdas) thetas.push_back(std::arg(l));

  // Tail-windowed Cesaro mean A = (1/N) sum_{n in [N,2N)} conj(lambda)^n T^n,
  // squared. On the peripheral part A = P_lambda + sum_b g(b) P_b with
  // |g(b)| = O(1/(N |1 - b conj(lambda)|)), vanishing exactly over full
  // periods; squaring sends the cross coefficients to g^2 (the Fejer
  // triangular window, by the convolution identity) while fixing the
  // eigenprojection, and the stable tail is O(r^N).
  std::vector<Mat> sums(lambdas.size(), Mat::Zero(n, n));
  Mat cur = t.power(n_iter);
  for (long k = n_iter; k < 2L * n_iter; ++k) {
    for (size_t j = 0; j < lambdas.size(); ++j)
      sums[j] += std::polar(1.0, -thetas[j] * static_cast<double>(k)) * cur;
    if (k + 1 < 2L * n_iter) cur = t.superop * cur;
  }
  Mat total = Mat::Zero(n, n);
  for (const Mat& s : sums) {
    Mat window = s / static_cast<double>(n_iter);
    total += window * window;
  }
  return total;
}

Mat mean_ergodic_projection(const ChannelMap& t, int n_iter) {
  if (n_iter < 1)
    throw Error(ErrorKind::validation, "mean needs at least one iteration");
  int n = t.algebra.coord_dim();
  Mat sum = Mat::Zero(n, n);
  Mat cur = Mat::Identity(n, n);
  for (int k = 0; k < n_iter; ++k) {
    sum += cur;
    if (k + 1 < n_iter) cur = t.superop * cur;
  }
  return sum / static_cast<double>(n_iter);
}

IsometryDiagnostic isometry_check(const AlgebraElement& x, const ChannelMap& t,
                                  const StateFamily& family, double tol,
                                  int samples, std::uint64_t seed) {
  IsometryDiagnostic diag;
  diag.pass = true;
  AlgebraElement tx = t.apply(x);
  Rng rng(seed);
  std::vector<AlgebraElement> probes;
  for (int s = 0; s < samples; ++s) probes.push_back(rng.random_element(t.algebra));

  for (const NormalState& phi : family.states) {
    double xx = inner_phi(phi, x, x).real();
    double txtx = inner_phi(phi, tx, tx).real();
    double defect = std::abs(txtx - xx);
    if (defect > tol * xx) diag.pass = false;
    if (xx > 0)
      diag.max_relative_defect = std::max(diag.max_relative_defect, defect / xx);

    for (const AlgebraElement& y : probes) {
      Complex lhs = inner_phi(phi, tx, t.apply(y));
      Complex rhs = inner_phi(phi, x, y);
      double scale = norm_phi(phi, x) * norm_phi(phi, y);
      double pdef = std::abs(lhs - rhs);
      if (pdef > tol * std::max(scale, 1e-30) && scale > 0) diag.pass = false;
      if (scale > 0)
        diag.max_polarized_defect = std::max(diag.max_polarized_defect, pdef / scale);
    }
  }
  return diag;
}

KernelDiagnostic kernel_membership(const AlgebraElement& x, const JdlgSplit& split,
                                   const ChannelMap& t, const NormalState& phi,
                                   double tol, int n_max) {
  KernelDiagnostic diag;
  PhiGeometry geom(t.algebra, phi);
  Vec coords = x.coords();
  diag.projection_norm = geom.coords_norm(split.projection * coords);

  double x_norm = geom.coords_norm(coords);
  Vec cur = coords;
  diag.orbit_norms.push_back(x_norm);
  diag.min_orbit_norm = x_norm;
  for (int k = 1; k <= n_max; ++k) {
    cur = t.superop * cur;
    double nk = geom.coords_norm(cur);
    diag.orbit_norms.push_back(nk);
    diag.min_orbit_norm = std::min(diag.min_orbit_norm, nk);
  }

  // geometric fit on the decaying window
  std::vector<double> xs, ys;
  for (size_t k = 0; k < diag.orbit_norms.size(); ++k)
    if (diag.orbit_norms[k] > 1e-14 * std::max(x_norm, 1e-30)) {
      xs.push_back(static_cast<double>(k));
      ys.push_back(std::log(diag.orbit_norms[k]));
    }
  if (xs.size() >= 2)
    diag.fitted_rate = std::exp(fit_line(xs, ys).first);

  diag.stable_certified =
      x_norm == 0.0 || diag.min_orbit_norm <= std::max(tol, 1e-12) * x_norm;
  return diag;
}

}  // namespace jdlg
