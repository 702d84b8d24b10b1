#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "jdlg/channel.hpp"
#include "test_helpers.hpp"

using namespace jdlg;
using namespace jdlg::testing;

TEST_CASE("from_kraus: identity and dephasing actions") {
  BlockAlgebra m2 = BlockAlgebra::full(2);
  ChannelMap id = from_kraus(m2, {Mat::Identity(2, 2)});
  CHECK((id.superop - Mat::Identity(4, 4)).norm() < 1e-14);

  // p X + (1-p) Z X Z = (2p - 1) X at p = 0.75
  ChannelMap deph = dephasing_channel(0.75);
  AlgebraElement x = pauli(m2, 1);
  CHECK((deph.apply(x) - x * Complex(0.5, 0)).frobenius_norm() < 1e-12);
  AlgebraElement z = pauli(m2, 3);
  CHECK((deph.apply(z) - z).frobenius_norm() < 1e-12);
}

TEST_CASE("unitary Kraus preserves the trace inner product") {
  BlockAlgebra m2 = BlockAlgebra::full(2);
  Rng rng(41);
  ChannelMap conj = from_kraus(m2, {rng.random_unitary(2)});
  for (int i = 0; i < 20; ++i) {
    AlgebraElement x = rng.random_element(m2);
    AlgebraElement y = rng.random_element(m2);
    Complex before = 0, after = 0;
    before = mul(x.adjoint(), y).block(0).trace();
    after = mul(conj.apply(x).adjoint(), conj.apply(y)).block(0).trace();
    CHECK(std::abs(before - after) < 1e-11 * (1 + std::abs(before)));
  }
}

TEST_CASE("Kraus sets must preserve the block structure") {
  BlockAlgebra a({1, 1});
  Mat k = Mat::Zero(2, 2);
  k(0, 1) = 1.0;  // maps block 2 into block 1 coherences
  k(1, 0) = 1.0;
  // X x X on diagonal x stays diagonal, so this one is fine
  CHECK_NOTHROW(from_kraus(a, {k}));
  // a Hadamard-like mixer creates off-diagonal terms and must be rejected
  Mat h(2, 2);
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  CHECK_THROWS_AS(from_kraus(a, {h}), Error);
}

TEST_CASE("Choi conversions under the fixed convention") {
  BlockAlgebra m2 = BlockAlgebra::full(2);
  ChannelMap id = identity_channel(m2);
  Mat choi = to_choi(id);
  // C = sum_ij E_ij (x) E_ij
  Mat want = Mat::Zero(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) want(i * 2 + i, j * 2 + j) = 1.0;
  CHECK((choi - want).norm() < 1e-14);

  // T(x) = tr(x)/2 * I has Choi I/2
  ChannelMap dep = depolarize_to_mixed_channel(2);
  CHECK((to_choi(dep) - 0.5 * Mat::Identity(4, 4)).norm() < 1e-12);

  Rng rng(43);
  Mat g = rng.ginibre(4, 4);
  ChannelMap random = channel_from_superop(m2, g);
  ChannelMap back = from_choi(m2, to_choi(random));
  CHECK((back.superop - random.superop).norm() < 1e-12 * g.norm());

  BlockAlgebra two({1, 1});
  CHECK_THROWS_AS(to_choi(identity_channel(two)), Error);
}

TEST_CASE("complete positivity diagnostics") {
  ChannelMap deph = dephasing_channel(0.75);
  CpDiagnostic d = is_completely_positive(deph);
  CHECK(d.completely_positive);
  // Choi eigenvalues are {2p, 2(1-p), 0, 0}
  Eigen::SelfAdjointEigenSolver<Mat> es(to_choi(deph));
  CHECK(es.eigenvalues()(3) == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(es.eigenvalues()(2) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(d.min_choi_eigenvalue >= -1e-12);

  CpDiagnostic t = is_completely_positive(transpose_channel_m2());
  CHECK_FALSE(t.completely_positive);
  CHECK(t.min_choi_eigenvalue == doctest::Approx(-1.0).epsilon(1e-10));

  CHECK(is_completely_positive(identity_channel(BlockAlgebra::full(2)))
            .completely_positive);
}

TEST_CASE("blockwise CP test on a direct sum") {
  // stochastic matrices on C^n are CP
  ChannelMap cyc = cycle_channel(3);
  CHECK(is_completely_positive(cyc).completely_positive);
  // flipping a sign breaks positivity of a block pair
  Mat bad = cyc.superop;
  bad(0, 1) = -1.0;
  CHECK_FALSE(is_completely_positive(
                  channel_from_superop(BlockAlgebra::classical(3), bad))
                  .completely_positive);
}

TEST_CASE("preadjoint duality, involution and trace preservation") {
  BlockAlgebra m2 = BlockAlgebra::full(2);
  ChannelMap deph = dephasing_channel(0.75);
  ChannelMap pre = preadjoint(deph);

  // Hermitian Kraus operators make dephasing self-preadjoint
  CHECK((pre.superop - deph.superop).norm() < 1e-13);

  Rng rng(47);
  for (int i = 0; i < 20; ++i) {
    Mat rho = rng.random_density(2);
    AlgebraElement r(m2, {rho});
    AlgebraElement x = rng.random_element(m2);
    Complex lhs = mul(pre.apply(r), x).block(0).trace();
    Complex rhs = mul(r, deph.apply(x)).block(0).trace();
    CHECK(std::abs(lhs - rhs) < 1e-12 * (1 + std::abs(lhs)));
    // unital channel: the preadjoint preserves the trace
    CHECK(std::abs(pre.apply(r).block(0).trace() - rho.trace()) < 1e-12);
  }

  ChannelMap twice = preadjoint(pre);
  CHECK((twice.superop - deph.superop).norm() < 1e-14);
}

TEST_CASE("invariant states") {
  // unital channel on M_n fixes the maximally mixed state
  ChannelMap deph = dephasing_channel(0.6);
  InvariantStateResult inv = find_invariant_state(deph);
  CHECK(inv.faithful);
  CHECK((inv.state.rho(0) - 0.5 * Mat::Identity(2, 2)).norm() < 1e-10);
  CHECK(inv.fixed_space_dim == 2);  // diagonal densities are all fixed

  // 3-cycle: the uniform distribution
  ChannelMap cyc = cycle_channel(3);
  InvariantStateResult uniform = find_invariant_state(cyc);
  CHECK(uniform.faithful);
  for (int b = 0; b < 3; ++b)
    CHECK(std::abs(uniform.state.rho(b)(0, 0) - Complex(1.0 / 3, 0)) < 1e-12);

  // amplitude damping decays onto |0><0|, which is not faithful
  ChannelMap ad = amplitude_damping(0.3);
  InvariantStateResult ground = find_invariant_state(ad);
  CHECK_FALSE(ground.faithful);
  CHECK(std::abs(ground.state.rho(0)(0, 0) - Complex(1, 0)) < 1e-10);
  CHECK(std::abs(ground.state.rho(0)(1, 1)) < 1e-10);

  // no invariant state at all: a strict contraction
  BlockAlgebra m2 = BlockAlgebra::full(2);
  ChannelMap half = channel_from_superop(m2, 0.5 * Mat::Identity(4, 4));
  CHECK_THROWS_AS(find_invariant_state(half), Error);
}

TEST_CASE("invariance residuals") {
  ChannelMap deph = dephasing_channel(0.75);
  NormalState mixed = NormalState::maximally_mixed(BlockAlgebra::full(2));
  CHECK(check_invariance(deph, mixed).max_residual < 1e-13);

  ChannelMap cyc = cycle_channel(3);
  CHECK(check_invariance(cyc, uniform_classical(3)).max_residual < 1e-13);

  // a skewed distribution gets permuted: the residual is the exact shift
  BlockAlgebra c3 = BlockAlgebra::classical(3);
  std::vector<Mat> rho;
  double probs[3] = {0.5, 0.3, 0.2};
  for (double p : probs) {
    Mat m(1, 1);
    m(0, 0) = p;
    rho.push_back(m);
  }
  NormalState skew(c3, rho);
  InvarianceDiagnostic diag = check_invariance(cyc, skew);
  CHECK_FALSE(diag.within_tolerance);
  // preadjoint of (Tf)(i) = f(i+1) moves mass i -> i+1
  double expect = std::sqrt((0.5 - 0.2) * (0.5 - 0.2) + (0.3 - 0.5) * (0.3 - 0.5) +
                            (0.2 - 0.3) * (0.2 - 0.3));
  double got = 0;
  for (double r : diag.block_residuals) got += r * r;
  CHECK(std::sqrt(got) == doctest::Approx(expect).epsilon(1e-10));
  CHECK(diag.max_residual > 0.1);
}

TEST_CASE("representation coherence across stored forms") {
  BlockAlgebra m2 = BlockAlgebra::full(2);
  Rng rng(53);
  std::vector<Mat> kraus{0.6 * rng.random_unitary(2), 0.8 * rng.random_unitary(2)};
  ChannelMap t = from_kraus(m2, kraus);
  for (int i = 0; i < 10; ++i) {
    AlgebraElement x = rng.random_element(m2);
    Mat direct = Mat::Zero(2, 2);
    for (const Mat& k : kraus) direct += k * x.block(0) * k.adjoint();
    CHECK((t.apply(x).block(0) - direct).norm() < 1e-10 * (1 + direct.norm()));
  }
  ChannelMap back = from_choi(m2, to_choi(t));
  CHECK((back.superop - t.superop).norm() < 1e-10);
}

TEST_CASE("composition matches Kraus composition") {
  BlockAlgebra m2 = BlockAlgebra::full(2);
  Rng rng(59);
  ChannelMap a = from_kraus(m2, {rng.random_unitary(2)});
  ChannelMap b = dephasing_channel(0.3);
  ChannelMap ab = compose(a, b);
  CHECK((ab.superop - a.superop * b.superop).norm() < 1e-14);
  REQUIRE(ab.kraus.has_value());
  ChannelMap again = from_kraus(m2, *ab.kraus);
  CHECK((again.superop - ab.superop).norm() < 1e-12);
}

TEST_CASE("Kadison-Schwarz spot check for unital CP maps") {
  Rng rng(61);
  ChannelMap deph = dephasing_channel(0.8);
  ChannelMap fp = flip_pinch_channel();
  for (int i = 0; i < 100; ++i) {
    AlgebraElement x = rng.random_element(BlockAlgebra::full(2));
    CHECK(schwarz_defect_min_eig(deph, x) >= -1e-10 * (1 + x.frobenius_norm()));
    CHECK(schwarz_defect_min_eig(fp, x) >= -1e-10 * (1 + x.frobenius_norm()));
  }
}

TEST_CASE("semigroup specs require commuting generators") {
  ChannelMap deph = dephasing_channel(0.75);
  ChannelMap deph2 = compose(deph, deph);
  SemigroupSpec ok = make_semigroup({deph, deph2});
  CHECK(ok.commuting);

  BlockAlgebra m2 = BlockAlgebra::full(2);
  Mat h(2, 2);
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  ChannelMap hadamard = from_kraus(m2, {h});
  try {
    make_semigroup({deph, hadamard});
    FAIL("expected a non-commuting rejection");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::unsupported);
    CHECK(std::string(e.what()).find("0") != std::string::npos);
    CHECK(std::string(e.what()).find("1") != std::string::npos);
  }

  SemigroupSpec single = make_semigroup({deph});
  CHECK_FALSE(single.commuting);
}
