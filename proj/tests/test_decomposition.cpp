#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "jdlg/decomposition.hpp"
#include "jdlg/numeric.hpp"
#include "test_helpers.hpp"

using namespace jdlg;
using namespace jdlg::testing;

namespace {

// 3-cycle (+) 2-point averaging on C^5
ChannelMap cycle3_plus_averaging() {
  BlockAlgebra c5 = BlockAlgebra::classical(5);
  Mat m = Mat::Zero(5, 5);
  for (int i = 0; i < 3; ++i) m(i, (i + 1) % 3) = 1.0;
  for (int i = 3; i < 5; ++i)
    for (int j = 3; j < 5; ++j) m(i, j) = 0.5;
  return channel_from_superop(c5, m, "cycle3+avg2");
}

}  // namespace

TEST_CASE("eigendecomposition of basic channels") {
  BlockAlgebra m2 = BlockAlgebra::full(2);
  SpectralData id = eigendecompose(identity_channel(m2));
  REQUIRE(id.eigenvalues.size() == 4);
  for (Complex v : id.eigenvalues) CHECK(std::abs(v - Complex(1, 0)) < 1e-12);
  CHECK(id.peripheral.size() == 4);
  CHECK(id.stable_radius == 0.0);

  SpectralData deph = eigendecompose(dephasing_channel(0.75));
  std::vector<Complex> want{1, 1, 0.5, 0.5};
  CHECK(match_multisets(deph.eigenvalues, want, 1e-10).matched);
  CHECK(deph.peripheral.size() == 2);
  CHECK(deph.stable_radius == doctest::Approx(0.5).epsilon(1e-12));

  SpectralData mix = eigendecompose(cycle3_plus_averaging());
  std::vector<Complex> cyc{1, std::polar(1.0, 2 * M_PI / 3),
                           std::polar(1.0, -2 * M_PI / 3), 1, 0};
  CHECK(match_multisets(mix.eigenvalues, cyc, 1e-10).matched);
  CHECK(mix.peripheral.size() == 4);
  CHECK(mix.stable_radius <= 1e-12);
  CHECK(mix.defective_peripheral.empty());
}

TEST_CASE("eigenvalue ordering is by modulus then phase") {
  SpectralData sd = eigendecompose(cycle_channel(4));
  REQUIRE(sd.eigenvalues.size() == 4);
  double prev_phase = -1;
  for (Complex v : sd.eigenvalues) {
    CHECK(std::abs(std::abs(v) - 1.0) < 1e-12);
    double ph = canonical_phase(v);
    CHECK(ph >= prev_phase - 1e-12);
    prev_phase = ph;
  }
}

TEST_CASE("split of the identity is trivial") {
  BlockAlgebra m2 = BlockAlgebra::full(2);
  NormalState mixed = NormalState::maximally_mixed(m2);
  JdlgSplit split = jdlg_split(identity_channel(m2), mixed);
  CHECK((split.projection - Mat::Identity(4, 4)).norm() < 1e-10);
  CHECK(split.dim_reversible() == 4);
  CHECK(split.dim_stable() == 0);
}

TEST_CASE("split of dephasing is the pinching onto the diagonal") {
  BlockAlgebra m2 = BlockAlgebra::full(2);
  NormalState mixed = NormalState::maximally_mixed(m2);
  ChannelMap deph = dephasing_channel(0.75);
  JdlgSplit split = jdlg_split(deph, mixed);
  CHECK(split.dim_reversible() == 2);
  CHECK(split.dim_stable() == 2);

  AlgebraElement z = pauli(m2, 3), x = pauli(m2, 1), y = pauli(m2, 2);
  CHECK((split.projection * z.coords() - z.coords()).norm() < 1e-10);
  CHECK((split.projection * x.coords()).norm() < 1e-10);
  CHECK((split.projection * y.coords()).norm() < 1e-10);

  // the stable basis spans {X, Y}: P annihilates it and Z expands in it
  for (const AlgebraElement& s : split.stable_basis)
    CHECK(std::abs(inner_phi(mixed, s, z)) < 1e-10);
}

TEST_CASE("split of depolarize-to-mixed leaves only the unit") {
  BlockAlgebra m2 = BlockAlgebra::full(2);
  NormalState mixed = NormalState::maximally_mixed(m2);
  JdlgSplit split = jdlg_split(depolarize_to_mixed_channel(2), mixed);
  CHECK(split.dim_reversible() == 1);
  AlgebraElement one = AlgebraElement::identity(m2);
  double overlap = std::abs(inner_phi(mixed, split.reversible_basis[0], one));
  CHECK(overlap == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("split invariants: projection laws in the phi geometry") {
  BlockAlgebra m2 = BlockAlgebra::full(2);
  NormalState mixed = NormalState::maximally_mixed(m2);
  for (ChannelMap t : {dephasing_channel(0.6), flip_pinch_channel(),
                       depolarize_to_mixed_channel(2)}) {
    JdlgSplit split = jdlg_split(t, mixed);
    const Mat& p = split.projection;
    CHECK((p * p - p).norm() <= 1e-9);
    PhiGeometry geom(m2, mixed);
    CHECK((p - geom.superop_adjoint(p)).norm() <= 1e-9);
    CHECK((p * t.superop - t.superop * p).norm() <= 1e-9);
    CHECK(split.dim_reversible() + split.dim_stable() == 4);
    CHECK(split.restricted_condition <= 1.0 + 1e-6);
    CHECK(split.basis_orthonormality <= 1e-10);
    // the reversible basis is phi-orthonormal and spans ran P
    for (const AlgebraElement& r : split.reversible_basis)
      CHECK((p * r.coords() - r.coords()).norm() < 1e-9);
    for (const AlgebraElement& s : split.stable_basis)
      CHECK((p * s.coords()).norm() < 1e-9);
  }
}

TEST_CASE("split refuses failing hypotheses and non-faithful states") {
  BlockAlgebra m2 = BlockAlgebra::full(2);
  NormalState mixed = NormalState::maximally_mixed(m2);
  ChannelMap twice =
      channel_from_superop(m2, 2.0 * Mat::Identity(4, 4), "2*identity");
  CHECK_THROWS_AS(jdlg_split(twice, mixed), Error);

  Mat pure = Mat::Zero(2, 2);
  pure(0, 0) = 1.0;
  NormalState ground(m2, {pure});
  CHECK_THROWS_AS(jdlg_split(identity_channel(m2), ground), Error);
}

TEST_CASE("averaging oracle on the identity channel") {
  BlockAlgebra m2 = BlockAlgebra::full(2);
  ChannelMap id = identity_channel(m2);
  for (int n : {1, 7, 100}) {
    Mat avg = averaging_projection_oracle(id, Complex(1, 0), n);
    CHECK((avg - Mat::Identity(4, 4)).norm() < 1e-12);
  }
  CHECK_THROWS_AS(averaging_projection_oracle(id, Complex(0.5, 0), 10), Error);
}

TEST_CASE("averaging oracle approximates the dephasing pinching") {
  ChannelMap deph = dephasing_channel(0.75);
  Mat avg = averaging_projection_oracle(deph, Complex(1, 0), 10000);
  Mat want = Mat::Zero(4, 4);
  want(0, 0) = 1;
  want(3, 3) = 1;
  CHECK((avg - want).norm() < 1e-3);
}

TEST_CASE("averaging oracle is exact over full cycle periods") {
  ChannelMap cyc = cycle_channel(3);
  Complex omega = std::polar(1.0, 2 * M_PI / 3);
  // reading the next site has eigenvector v_k(i) = w^{ik} with eigenvalue
  // w^k, so the eigenprojection is the finite character sum over a period
  Mat want = Mat::Zero(3, 3);
  Mat c = cyc.superop;
  Mat power = Mat::Identity(3, 3);
  for (int j = 0; j < 3; ++j) {
    want += std::pow(std::conj(omega), j) * power / 3.0;
    power = c * power;
  }
  Mat got = averaging_projection_oracle(cyc, omega, 3 * 400);
  CHECK((got - want).norm() < 1e-12);
  CHECK(svd_rank(want) == 1);
}

TEST_CASE("batched oracle equals the sum of single calls bit for bit") {
  ChannelMap fp = flip_pinch_channel();
  std::vector<Complex> lambdas{Complex(1, 0), Complex(-1, 0)};
  Mat batched = peripheral_projection_oracle(fp, lambdas, 500);
  Mat summed = averaging_projection_oracle(fp, lambdas[0], 500) +
               averaging_projection_oracle(fp, lambdas[1], 500);
  CHECK((batched - summed).norm() == 0.0);
}

TEST_CASE("mean ergodic projection") {
  BlockAlgebra m2 = BlockAlgebra::full(2);
  CHECK((mean_ergodic_projection(identity_channel(m2), 64) -
         Mat::Identity(4, 4))
            .norm() < 1e-13);

  // 3-cycle: averaging onto constants
  Mat avg = mean_ergodic_projection(cycle_channel(3), 3 * 2000);
  CHECK((avg - Mat::Constant(3, 3, 1.0 / 3)).norm() < 1e-12);

  // dephasing: the fixed space is the whole diagonal, span{1, Z}
  Mat q = mean_ergodic_projection(dephasing_channel(0.75), 20000);
  Mat want = Mat::Zero(4, 4);
  want(0, 0) = 1;
  want(3, 3) = 1;
  CHECK((q - want).norm() < 1e-3);
}

TEST_CASE("P agrees with the Cesaro limit of the h-th power") {
  // for a resolved order h the reversible part is Fix(T^h), so the plain
  // mean of (T^h)^n is yet another route to the same projection
  BlockAlgebra c3 = BlockAlgebra::classical(3);
  ChannelMap cyc = cycle_channel(3);
  NormalState uniform = uniform_classical(3);
  JdlgSplit csplit = jdlg_split(cyc, uniform);
  ChannelMap cyc3 = channel_from_superop(c3, cyc.power(3));
  CHECK((mean_ergodic_projection(cyc3, 64) - csplit.projection).norm() < 1e-12);

  BlockAlgebra m2 = BlockAlgebra::full(2);
  NormalState mixed = NormalState::maximally_mixed(m2);
  ChannelMap fp = flip_pinch_channel();
  JdlgSplit fsplit = jdlg_split(fp, mixed);
  ChannelMap fp2 = channel_from_superop(m2, fp.power(2));
  CHECK((mean_ergodic_projection(fp2, 4096) - fsplit.projection).norm() < 1e-3);
}

TEST_CASE("isometry check separates the reversible and stable parts") {
  BlockAlgebra m2 = BlockAlgebra::full(2);
  NormalState mixed = NormalState::maximally_mixed(m2);
  StateFamily family = StateFamily::single(mixed);
  ChannelMap deph = dephasing_channel(0.75);

  IsometryDiagnostic z = isometry_check(pauli(m2, 3), deph, family, 1e-8);
  CHECK(z.pass);

  IsometryDiagnostic x = isometry_check(pauli(m2, 1), deph, family, 1e-8);
  CHECK_FALSE(x.pass);
  // ||T X||^2 = 0.25 against ||X||^2 = 1
  CHECK(x.max_relative_defect == doctest::Approx(0.75).epsilon(1e-10));

  IsometryDiagnostic zero =
      isometry_check(AlgebraElement::zero(m2), deph, family, 1e-8);
  CHECK(zero.pass);
}

TEST_CASE("kernel membership certificates") {
  BlockAlgebra m2 = BlockAlgebra::full(2);
  NormalState mixed = NormalState::maximally_mixed(m2);
  ChannelMap deph = dephasing_channel(0.75);
  JdlgSplit split = jdlg_split(deph, mixed);

  KernelDiagnostic x = kernel_membership(pauli(m2, 1), split, deph, mixed);
  CHECK(x.stable_certified);
  CHECK(x.projection_norm < 1e-9);
  CHECK(x.fitted_rate == doctest::Approx(0.5).epsilon(1e-6));
  for (int n = 0; n <= 10; ++n)
    CHECK(x.orbit_norms[static_cast<size_t>(n)] ==
          doctest::Approx(std::pow(0.5, n)).epsilon(1e-9));

  KernelDiagnostic z = kernel_membership(pauli(m2, 3), split, deph, mixed);
  CHECK_FALSE(z.stable_certified);
  CHECK(z.projection_norm == doctest::Approx(1.0).epsilon(1e-9));

  KernelDiagnostic zero =
      kernel_membership(AlgebraElement::zero(m2), split, deph, mixed);
  CHECK(zero.stable_certified);
}

TEST_CASE("full pipeline on a hybrid two-block algebra") {
  // T(x (+) c) = (p x + (1-p) c 1) (+) (q c + (1-q) tr(x)/2) on M_2 (+) C:
  // unital, CP blockwise, ergodic with Fix = C 1; the scalar sector
  // carries eigenvalues {1, 0} and the traceless sector contracts by p
  BlockAlgebra a({2, 1});
  double p = 0.5, q = 0.5;
  int n = a.coord_dim();  // 5
  Mat s = Mat::Zero(n, n);
  // block 1 coordinates 0..3 (column-major), block 2 coordinate 4
  s(0, 0) = p;
  s(1, 1) = p;
  s(2, 2) = p;
  s(3, 3) = p;
  s(0, 4) = 1 - p;
  s(3, 4) = 1 - p;
  s(4, 4) = q;
  s(4, 0) = (1 - q) / 2;
  s(4, 3) = (1 - q) / 2;
  ChannelMap t = channel_from_superop(a, s, "hybrid");

  CHECK(is_completely_positive(t).completely_positive);
  CHECK(is_unital(t));

  InvariantStateResult inv = find_invariant_state(t);
  CHECK(inv.faithful);
  CHECK(check_invariance(t, inv.state).max_residual < 1e-10);

  HypothesisDiagnostic hyp = verify_hypothesis(t, StateFamily::single(inv.state));
  CHECK(hyp.pass);

  SpectralData sd = eigendecompose(t);
  CHECK(sd.peripheral.size() == 1);
  CHECK(sd.stable_radius == doctest::Approx(p).epsilon(1e-10));

  JdlgSplit split = jdlg_split(t, inv.state);
  CHECK(split.dim_reversible() == 1);
  CHECK(split.dim_stable() == 4);
  // the reversible part is spanned by the unit of the direct sum
  AlgebraElement one = AlgebraElement::identity(a);
  CHECK(std::abs(std::abs(inner_phi(inv.state, split.reversible_basis[0], one) /
                          norm_phi(inv.state, one)) -
                 1.0) < 1e-9);

  Mat oracle = peripheral_projection_oracle(t, {Complex(1, 0)}, 4000);
  CHECK((split.projection - oracle).norm() < 1e-6);
}

TEST_CASE("a strict contraction splits into a purely stable algebra") {
  BlockAlgebra m2 = BlockAlgebra::full(2);
  NormalState mixed = NormalState::maximally_mixed(m2);
  ChannelMap half = channel_from_superop(m2, 0.5 * Mat::Identity(4, 4));
  JdlgSplit split = jdlg_split(half, mixed);
  CHECK(split.dim_reversible() == 0);
  CHECK(split.dim_stable() == 4);
  CHECK(split.projection.norm() < 1e-12);
}

TEST_CASE("near-threshold eigenvalues trigger a warning") {
  // an eigenvalue at 1 - 1e-7 sits inside the declared warning band
  double p = 1.0 - 5e-8;
  SpectralData sd = eigendecompose(dephasing_channel(p));
  CHECK(sd.peripheral.size() == 2);
  CHECK_FALSE(sd.warnings.empty());

  SpectralData clean = eigendecompose(dephasing_channel(0.75));
  CHECK(clean.warnings.empty());
}

TEST_CASE("defective peripheral spectrum is detected") {
  // a Jordan block at eigenvalue 1 on C^2 coordinates
  BlockAlgebra c2 = BlockAlgebra::classical(2);
  Mat m(2, 2);
  m << 1, 1, 0, 1;
  SpectralData sd = eigendecompose(channel_from_superop(c2, m));
  CHECK_FALSE(sd.defective_peripheral.empty());
}
