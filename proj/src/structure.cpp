#include "jdlg/structure.hpp"

#include <cmath>

#include "jdlg/numeric.hpp"

namespace jdlg {

PeripheralGroup detect_peripheral_group(const SpectralData& data, double tol,
                                        int max_order) {
  PeripheralGroup group;
  for (int k : data.peripheral)
    group.eigenvalues.push_back(data.eigenvalues[static_cast<size_t>(k)]);

  for (int h = 1; h <= max_order && !group.order; ++h) {
    bool all = true;
    for (Complex v : group.eigenvalues) {
      double best = std::numeric_limits<double>::infinity();
      for (int k = 0; k < h; ++k)
        best = std::min(best, std::abs(v - std::polar(1.0, 2.0 * M_PI * k / h)));
      if (best > tol) {
        all = false;
        break;
      }
    }
    if (all) group.order = h;
  }

  size_t m = group.eigenvalues.size();
  group.subgroup_closed = m > 0;
  group.closure_certificate.assign(m, std::vector<int>(m, -1));
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < m; ++j) {
      Complex want = group.eigenvalues[i] * std::conj(group.eigenvalues[j]);
      double best = std::numeric_limits<double>::infinity();
      int arg = -1;
      for (size_t k = 0; k < m; ++k) {
        double d = std::abs(want - group.eigenvalues[k]);
        if (d < best) {
          best = d;
          arg = static_cast<int>(k);
        }
      }
      group.max_closure_defect = std::max(group.max_closure_defect, best);
      if (best <= tol)
        group.closure_certificate[i][j] = arg;
      else
        group.subgroup_closed = false;
    }
  return group;
}

namespace {

AlgebraElement project(const JdlgSplit& split, const AlgebraElement& x) {
  return AlgebraElement::from_coords(x.algebra(), split.projection * x.coords());
}

AlgebraElement random_reversible(const JdlgSplit& split, Rng& rng) {
  AlgebraElement acc = AlgebraElement::zero(
      split.reversible_basis.front().algebra());
  for (const AlgebraElement& r : split.reversible_basis)
    acc = acc + r * rng.normal_complex();
  return acc;
}

}  // namespace

AlgebraElement choi_effros_product(const ChannelMap& t, const JdlgSplit& split,
                                   const NormalState& phi, const AlgebraElement& x,
                                   const AlgebraElement& y, double tol) {
  CpDiagnostic cp = is_completely_positive(t);
  if (!cp.completely_positive)
    throw Error(ErrorKind::unsupported,
                "the Choi-Effros product needs a completely positive generator "
                "(min Choi eigenvalue " +
                    std::to_string(cp.min_choi_eigenvalue) + ")");
  for (const AlgebraElement* e : {&x, &y}) {
    double res = norm_phi(phi, project(split, *e) - *e);
    if (res > tol * std::max(1.0, norm_phi(phi, *e)))
      throw Error(ErrorKind::validation,
                  "input lies outside ran P (projection residual " +
                      std::to_string(res) + ")");
  }
  return project(split, mul(x, y));
}

ConditionalExpectationCheck conditional_expectation_check(const JdlgSplit& split,
                                                          const ChannelMap& t,
                                                          const NormalState& phi,
                                                          int samples,
                                                          std::uint64_t seed) {
  ConditionalExpectationCheck check;
  if (split.reversible_basis.empty()) {
    check.skipped = true;
    return check;
  }
  const BlockAlgebra& a = t.algebra;
  int n = a.coord_dim();

  // faithfulness of P through phi o P = phi plus positive-cone samples
  double comp = 0;
  for (int k = 0; k < n; ++k) {
    Vec e = Vec::Zero(n);
    e(k) = 1.0;
    AlgebraElement unit = AlgebraElement::from_coords(a, e);
    comp = std::max(comp, std::abs(phi.value(project(split, unit)) -
                                   phi.value(unit)));
  }
  check.phi_composition_residual = comp;

  Rng rng(seed);
  check.cone_min_ratio = std::numeric_limits<double>::infinity();
  for (int s = 0; s < 16; ++s) {
    AlgebraElement x = rng.random_psd_element(a);
    double nx = x.frobenius_norm();
    if (nx == 0) continue;
    check.cone_min_ratio =
        std::min(check.cone_min_ratio, project(split, x).frobenius_norm() / nx);
  }
  check.faithful = check.phi_composition_residual <= 1e-8 &&
                   check.cone_min_ratio > 1e-8;
  if (!check.faithful) {
    check.skipped = true;
    return check;
  }

  for (int s = 0; s < samples; ++s) {
    AlgebraElement y = random_reversible(split, rng);
    AlgebraElement z = random_reversible(split, rng);
    AlgebraElement x = rng.random_element(a);
    AlgebraElement lhs = project(split, mul(mul(y, x), z));
    AlgebraElement rhs = mul(mul(y, project(split, x)), z);
    check.max_residual = std::max(check.max_residual,
                                  (lhs - rhs).frobenius_norm());
  }

  for (const AlgebraElement& ri : split.reversible_basis)
    for (const AlgebraElement& rj : split.reversible_basis) {
      AlgebraElement prod = mul(ri, rj);
      check.subalgebra_residual =
          std::max(check.subalgebra_residual,
                   (prod - project(split, prod)).frobenius_norm());
    }
  return check;
}

std::vector<AlgebraElement> multiplicative_domain(const ChannelMap& t,
                                                  const NormalState& phi,
                                                  double tol, std::uint64_t seed) {
  const BlockAlgebra& a = t.algebra;
  int n = a.coord_dim();
  Rng rng(seed);

  // Schwarz precondition on samples
  for (int s = 0; s < 16; ++s) {
    AlgebraElement x = rng.random_element(a);
    double lo = schwarz_defect_min_eig(t, x);
    double scale = x.frobenius_norm();
    if (lo < -1e-8 * std::max(1.0, scale * scale))
      throw Error(ErrorKind::unsupported,
                  "map violates the Schwarz inequality (defect " +
                      std::to_string(lo) + "); multiplicative domain undefined");
  }

  std::vector<AlgebraElement> units;
  for (int k = 0; k < n; ++k) {
    Vec e = Vec::Zero(n);
    e(k) = 1.0;
    units.push_back(AlgebraElement::from_coords(a, e));
  }

  // defect map D(x, y) = T(x* y) - T(x)* T(y), conjugate-linear in x;
  // stack over y to take the null space in the first argument
  Mat stacked(n * n, n);
  for (int p = 0; p < n; ++p) {
    AlgebraElement tp = t.apply(units[static_cast<size_t>(p)]);
    for (int q = 0; q < n; ++q) {
      AlgebraElement d =
          t.apply(mul(units[static_cast<size_t>(p)].adjoint(),
                      units[static_cast<size_t>(q)])) -
          mul(tp.adjoint(), t.apply(units[static_cast<size_t>(q)]));
      stacked.block(q * n, p, n, 1) = d.coords();
    }
  }

  Eigen::JacobiSVD<Mat> svd(stacked, Eigen::ComputeThinV);
  double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  std::vector<AlgebraElement> domain_basis;
  for (int k = 0; k < svd.singularValues().size(); ++k)
    if (svd.singularValues()(k) <= tol * std::max(smax, 1.0)) {
      Vec c = svd.matrixV().col(k).conjugate();
      domain_basis.push_back(AlgebraElement::from_coords(a, c));
    }

  // return the basis orthonormalized in the phi geometry
  if (phi.faithful()) {
    std::vector<AlgebraElement> onb;
    for (const AlgebraElement& cand : domain_basis) {
      AlgebraElement v = cand;
      for (int pass = 0; pass < 2; ++pass)
        for (const AlgebraElement& b : onb) v = v - b * inner_phi(phi, v, b);
      double nv = norm_phi(phi, v);
      if (nv > 1e-10) onb.push_back(v * Complex(1.0 / nv, 0));
    }
    if (onb.size() == domain_basis.size()) domain_basis = std::move(onb);
  }

  // verify the quadratic characterization on the basis...
  for (const AlgebraElement& b : domain_basis) {
    AlgebraElement tb = t.apply(b);
    double q = (t.apply(mul(b.adjoint(), b)) - mul(tb.adjoint(), tb))
                   .frobenius_norm();
    if (q > 1e-6)
      throw Error(ErrorKind::numeric,
                  "linear and quadratic characterizations disagree on the "
                  "returned basis (defect " +
                      std::to_string(q) + ")");
  }
  // ...and on random non-members
  if (static_cast<int>(domain_basis.size()) < n) {
    for (int s = 0; s < 8; ++s) {
      AlgebraElement x = rng.random_element(a);
      // project out the domain in the Frobenius inner product
      Vec cx = x.coords();
      for (const AlgebraElement& b : domain_basis) {
        Vec cb = b.coords();
        cx -= cb * (cb.adjoint() * cx)(0, 0) / (cb.adjoint() * cb)(0, 0).real();
      }
      AlgebraElement perp = AlgebraElement::from_coords(a, cx);
      if (perp.frobenius_norm() < 1e-8) continue;
      AlgebraElement tp = t.apply(perp);
      double q = (t.apply(mul(perp.adjoint(), perp)) - mul(tp.adjoint(), tp))
                     .frobenius_norm();
      if (q <= tol)
        throw Error(ErrorKind::numeric,
                    "a non-member passes the quadratic characterization; "
                    "domain basis is incomplete");
    }
  }
  return domain_basis;
}

std::vector<UnitaryEigenvector> unitary_eigenvectors(const ChannelMap& t,
                                                     const JdlgSplit& split,
                                                     const NormalState& phi, int h,
                                                     std::uint64_t seed) {
  if (h < 1)
    throw Error(ErrorKind::validation, "group order must be positive");
  const BlockAlgebra& a = t.algebra;
  int fixed_dim = a.coord_dim() -
                  svd_rank(t.superop - Mat::Identity(a.coord_dim(), a.coord_dim()));
  if (fixed_dim != 1)
    throw Error(ErrorKind::validation,
                "unitary eigenvector extraction needs an ergodic system "
                "(fixed space dimension " +
                    std::to_string(fixed_dim) + ")");

  std::vector<UnitaryEigenvector> result;
  AlgebraElement one = AlgebraElement::identity(a);
  UnitaryEigenvector u0{Complex(1, 0), one, 0.0,
                        (t.apply(one) - one).frobenius_norm()};
  result.push_back(std::move(u0));
  if (h == 1) return result;

  // seed: first reversible basis vector that is not fixed
  AlgebraElement x0 = AlgebraElement::zero(a);
  bool found = false;
  for (const AlgebraElement& r : split.reversible_basis)
    if ((t.apply(r) - r).frobenius_norm() > 1e-6) {
      x0 = r;
      found = true;
      break;
    }
  if (!found)
    throw Error(ErrorKind::numeric, "no non-fixed reversible direction found");

  Rng rng(seed);
  for (int attempt = 0; attempt < 9; ++attempt) {
    if (attempt > 0) {
      // retry with a random combination of the reversible basis
      x0 = AlgebraElement::zero(a);
      for (const AlgebraElement& r : split.reversible_basis)
        x0 = x0 + r * rng.normal_complex();
    }

    std::vector<AlgebraElement> orbit{x0};
    for (int j = 1; j < h; ++j) orbit.push_back(t.apply(orbit.back()));

    std::vector<UnitaryEigenvector> tail;
    bool ok = true;
    for (int k = 1; k < h; ++k) {
      AlgebraElement avg = AlgebraElement::zero(a);
      for (int j = 0; j < h; ++j)
        avg = avg + orbit[static_cast<size_t>(j)] *
                        (std::polar(1.0, 2.0 * M_PI * j * k / h) / double(h));
      double nrm = norm_phi(phi, avg);
      if (nrm <= 1e-8) {
        ok = false;
        break;
      }
      AlgebraElement u = avg * Complex(1.0 / nrm, 0);
      Complex lambda = std::polar(1.0, -2.0 * M_PI * k / h);
      tail.push_back(UnitaryEigenvector{
          lambda, u,
          (mul(u.adjoint(), u) - one).frobenius_norm(),
          (t.apply(u) - u * lambda).frobenius_norm()});
    }
    if (ok) {
      for (auto& e : tail) result.push_back(std::move(e));
      return result;
    }
  }
  throw Error(ErrorKind::numeric,
              "character averages vanished for every seed attempted");
}

TraceCheck trace_check(const NormalState& phi, const JdlgSplit& split,
                       const std::vector<UnitaryEigenvector>& eigenvectors) {
  TraceCheck check;
  for (const AlgebraElement& x : split.reversible_basis)
    for (const AlgebraElement& y : split.reversible_basis)
      check.trace_residual =
          std::max(check.trace_residual,
                   std::abs(phi.value(mul(x, y)) - phi.value(mul(y, x))));
  for (size_t j = 0; j < eigenvectors.size(); ++j)
    for (size_t k = 0; k < eigenvectors.size(); ++k) {
      if (j == k) continue;
      check.orthogonality_residual =
          std::max(check.orthogonality_residual,
                   std::abs(phi.value(mul(eigenvectors[j].u.adjoint(),
                                          eigenvectors[k].u))));
    }
  return check;
}

AutomorphismCheck automorphism_check(const ChannelMap& t, const JdlgSplit& split,
                                     const NormalState& phi, bool subalgebra) {
  AutomorphismCheck check;
  auto dot = [&](const AlgebraElement& x, const AlgebraElement& y) {
    AlgebraElement p = mul(x, y);
    return subalgebra ? p : project(split, p);
  };
  for (const AlgebraElement& x : split.reversible_basis) {
    check.star_residual =
        std::max(check.star_residual,
                 (t.apply(x.adjoint()) - t.apply(x).adjoint()).frobenius_norm());
    for (const AlgebraElement& y : split.reversible_basis) {
      AlgebraElement lhs = t.apply(dot(x, y));
      AlgebraElement rhs = dot(t.apply(x), t.apply(y));
      check.multiplicativity_residual = std::max(
          check.multiplicativity_residual, (lhs - rhs).frobenius_norm());
    }
  }

  int m = split.dim_reversible();
  if (m > 0) {
    PhiGeometry geom(t.algebra, phi);
    Mat restricted(m, m);
    for (int j = 0; j < m; ++j) {
      Vec img = t.superop * split.reversible_basis[static_cast<size_t>(j)].coords();
      for (int i = 0; i < m; ++i)
        restricted(i, j) = geom.coords_inner(
            img, split.reversible_basis[static_cast<size_t>(i)].coords());
    }
    Eigen::JacobiSVD<Mat> svd(restricted);
    check.min_singular_value = svd.singularValues()(m - 1);
    check.max_singular_value = svd.singularValues()(0);
  }
  return check;
}

StructureReport perron_frobenius_report(const ChannelMap& t, const NormalState& phi,
                                        double peripheral_tol, std::uint64_t seed) {
  StructureReport report;

  CpDiagnostic cp = is_completely_positive(t);
  report.completely_positive = cp.completely_positive;
  report.min_choi_eigenvalue = cp.min_choi_eigenvalue;
  AlgebraElement one = AlgebraElement::identity(t.algebra);
  report.unitality_residual = (t.apply(one) - one).frobenius_norm();
  report.unital = report.unitality_residual <= 1e-9;
  InvarianceDiagnostic inv = check_invariance(t, phi);
  report.invariance_residual = inv.max_residual;
  report.state_invariant = inv.max_residual <= 1e-9;
  report.state_faithful = phi.faithful();

  if (!report.completely_positive)
    throw Error(ErrorKind::validation,
                "not a W*-dynamical system: the map is not completely positive "
                "(min Choi eigenvalue " +
                    std::to_string(cp.min_choi_eigenvalue) + ")");
  if (!report.unital)
    throw Error(ErrorKind::validation,
                "not a W*-dynamical system: the map is not unital (residual " +
                    std::to_string(report.unitality_residual) + ")");
  if (!report.state_invariant)
    throw Error(ErrorKind::validation,
                "not a W*-dynamical system: the state is not invariant "
                "(residual " +
                    std::to_string(report.invariance_residual) + ")");
  if (!report.state_faithful)
    throw Error(ErrorKind::validation,
                "not a W*-dynamical system: the state is not faithful");

  SpectralData sd = eigendecompose(t, peripheral_tol);
  JdlgSplit split = jdlg_split(t, phi, peripheral_tol);

  int n = t.algebra.coord_dim();
  report.fixed_space_dim = n - svd_rank(t.superop - Mat::Identity(n, n));
  report.ergodic = report.fixed_space_dim == 1;
  report.partial = !report.ergodic;

  report.group = detect_peripheral_group(sd, peripheral_tol);

  // simplicity: geometric multiplicity of each peripheral cluster
  report.max_geometric_multiplicity = 0;
  std::vector<Complex> reps;
  for (int k : sd.peripheral) {
    Complex v = sd.eigenvalues[static_cast<size_t>(k)];
    bool seen = false;
    for (Complex r : reps)
      if (std::abs(r - v) <= 1e-8) seen = true;
    if (!seen) reps.push_back(v);
  }
  for (Complex r : reps) {
    int geo = n - svd_rank(t.superop - r * Mat::Identity(n, n));
    report.max_geometric_multiplicity =
        std::max(report.max_geometric_multiplicity, geo);
  }
  report.peripheral_simple = report.max_geometric_multiplicity <= 1 &&
                             reps.size() == sd.peripheral.size();

  // rotation invariance Sp(T) = alpha Sp(T) for every peripheral alpha
  for (Complex alpha : reps) {
    std::vector<Complex> rotated;
    for (Complex v : sd.eigenvalues) rotated.push_back(alpha * v);
    MatchResult match = match_multisets(sd.eigenvalues, rotated, 1e-8);
    report.rotation_defects.emplace_back(alpha, match.max_distance);
    report.max_rotation_defect =
        std::max(report.max_rotation_defect, match.max_distance);
  }

  report.expectation = conditional_expectation_check(split, t, phi, 64, seed);
  report.conditional_expectation_residual = report.expectation.max_residual;
  report.subalgebra_residual = report.expectation.subalgebra_residual;
  report.subalgebra = !report.expectation.skipped &&
                      report.subalgebra_residual <= 1e-8;

  AutomorphismCheck am = automorphism_check(t, split, phi, report.subalgebra);
  report.automorphism_residual = am.multiplicativity_residual;
  report.star_residual = am.star_residual;

  if (report.ergodic && report.group.order) {
    report.eigenvectors =
        unitary_eigenvectors(t, split, phi, *report.group.order, seed);
    TraceCheck tc = trace_check(phi, split, report.eigenvectors);
    report.trace_residual = tc.trace_residual;
    report.orthogonality_residual = tc.orthogonality_residual;

    // eigenvector relation T(u x) = lambda u T(x) on random samples
    Rng rng(seed + 1);
    for (const UnitaryEigenvector& ev : report.eigenvectors)
      for (int s = 0; s < 8; ++s) {
        AlgebraElement x = rng.random_element(t.algebra);
        AlgebraElement lhs = t.apply(mul(ev.u, x));
        AlgebraElement rhs = mul(ev.u, t.apply(x)) * ev.eigenvalue;
        report.eigenvector_relation_residual =
            std::max(report.eigenvector_relation_residual,
                     (lhs - rhs).frobenius_norm() /
                         std::max(1.0, x.frobenius_norm()));
      }
  }
  return report;
}

}  // namespace jdlg
