#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "jdlg/gns.hpp"
#include "jdlg/numeric.hpp"
#include "test_helpers.hpp"

using namespace jdlg;
using namespace jdlg::testing;

TEST_CASE("support projection of a faithful state is the unit") {
  BlockAlgebra a({2, 2});
  Rng rng(67);
  NormalState phi = rng.random_state(a);
  SupportSplit split = support_projection(a, phi);
  AlgebraElement one = AlgebraElement::identity(a);
  CHECK((split.support - one).frobenius_norm() < 1e-12);
  CHECK(split.l_basis.empty());
  CHECK(static_cast<int>(split.k_basis.size()) == a.coord_dim());
}

TEST_CASE("support projection of a pure qubit state") {
  BlockAlgebra m2 = BlockAlgebra::full(2);
  Mat pure = Mat::Zero(2, 2);
  pure(0, 0) = 1.0;
  NormalState phi(m2, {pure});
  SupportSplit split = support_projection(m2, phi);
  CHECK(std::abs(split.support.block(0)(0, 0) - Complex(1, 0)) < 1e-14);
  CHECK(std::abs(split.support.block(0)(1, 1)) < 1e-14);
  // the seminorm kernel is the second column of matrices
  CHECK(split.l_basis.size() == 2);
  for (const AlgebraElement& l : split.l_basis) {
    CHECK(norm_phi(phi, l) < 1e-12);
    CHECK((mul(l, split.support)).frobenius_norm() < 1e-12);
  }
  // p is a self-adjoint idempotent
  AlgebraElement p = split.support;
  CHECK((mul(p, p) - p).frobenius_norm() < 1e-13);
  CHECK((p.adjoint() - p).frobenius_norm() < 1e-13);
  // K basis is phi-orthonormal
  for (size_t i = 0; i < split.k_basis.size(); ++i)
    for (size_t j = 0; j < split.k_basis.size(); ++j) {
      Complex g = inner_phi(phi, split.k_basis[i], split.k_basis[j]);
      CHECK(std::abs(g - (i == j ? Complex(1, 0) : Complex(0, 0))) < 1e-12);
    }
  // K and L are orthogonal in the trace pairing
  for (const AlgebraElement& k : split.k_basis)
    for (const AlgebraElement& l : split.l_basis)
      CHECK(std::abs(mul(k.adjoint(), l).block(0).trace()) < 1e-12);
}

TEST_CASE("support projection on the classical two-point algebra") {
  BlockAlgebra c2 = BlockAlgebra::classical(2);
  Mat one(1, 1), zero(1, 1);
  one(0, 0) = 1.0;
  zero(0, 0) = 0.0;
  NormalState phi(c2, {one, zero});
  SupportSplit split = support_projection(c2, phi);
  CHECK(split.l_basis.size() == 1);
  CHECK(std::abs(split.l_basis[0].block(1)(0, 0)) > 0.9);  // spans (0, t)
  CHECK(std::abs(split.l_basis[0].block(0)(0, 0)) < 1e-14);
}

TEST_CASE("support compression is idempotent") {
  BlockAlgebra m2 = BlockAlgebra::full(2);
  Mat pure = Mat::Zero(2, 2);
  pure(0, 0) = 1.0;
  NormalState phi(m2, {pure});
  SupportSplit first = support_projection(m2, phi);
  // compressing again against the same state changes nothing
  SupportSplit second = support_projection(m2, phi);
  CHECK((first.support - second.support).frobenius_norm() == 0.0);
  REQUIRE(first.k_basis.size() == second.k_basis.size());
  for (size_t i = 0; i < first.k_basis.size(); ++i)
    CHECK((first.k_basis[i] - second.k_basis[i]).frobenius_norm() == 0.0);
}

TEST_CASE("gns matrix of the identity is the identity") {
  BlockAlgebra a({2, 1});
  Rng rng(71);
  NormalState phi = rng.random_state(a);
  GnsOperator g = gns_matrix(identity_channel(a), phi);
  CHECK((g.matrix - Mat::Identity(a.coord_dim(), a.coord_dim())).norm() < 1e-10);
}

TEST_CASE("gns matrix of dephasing in the Pauli basis") {
  BlockAlgebra m2 = BlockAlgebra::full(2);
  NormalState phi = NormalState::maximally_mixed(m2);
  std::vector<AlgebraElement> onb{pauli(m2, 0), pauli(m2, 1), pauli(m2, 2),
                                  pauli(m2, 3)};
  GnsOperator g = gns_matrix_in_basis(dephasing_channel(0.75), phi, onb);
  Mat want = Mat::Zero(4, 4);
  want(0, 0) = 1;
  want(1, 1) = 0.5;
  want(2, 2) = 0.5;
  want(3, 3) = 1;
  CHECK((g.matrix - want).norm() < 1e-12);
}

TEST_CASE("gns matrix of the 3-cycle in the indicator basis") {
  BlockAlgebra c3 = BlockAlgebra::classical(3);
  NormalState phi = uniform_classical(3);
  std::vector<AlgebraElement> onb;
  for (int i = 0; i < 3; ++i) {
    AlgebraElement e = AlgebraElement::zero(c3);
    e.block(i)(0, 0) = std::sqrt(3.0);
    onb.push_back(e);
  }
  GnsOperator g = gns_matrix_in_basis(cycle_channel(3), phi, onb);
  // a permutation matrix in the normalized indicator basis
  Mat want = Mat::Zero(3, 3);
  for (int i = 0; i < 3; ++i) want(i, (i + 1) % 3) = 1.0;
  CHECK((g.matrix - want).norm() < 1e-12);
}

TEST_CASE("gns compression of amplitude damping on the ground state") {
  BlockAlgebra m2 = BlockAlgebra::full(2);
  Mat pure = Mat::Zero(2, 2);
  pure(0, 0) = 1.0;
  NormalState phi(m2, {pure});
  ChannelMap ad = amplitude_damping(0.4);
  GnsOperator g = gns_matrix(ad, phi);
  CHECK(g.matrix.rows() == 2);  // dim K = n * rank = 2 * 1
  CHECK(g.spectral_norm() <= 1.0 + 1e-12);
}

TEST_CASE("theta is a semigroup homomorphism") {
  BlockAlgebra m2 = BlockAlgebra::full(2);
  NormalState mixed = NormalState::maximally_mixed(m2);
  ChannelMap a = dephasing_channel(0.7);
  ChannelMap b = flip_pinch_channel();
  GnsOperator ga = gns_matrix(a, mixed);
  GnsOperator gb = gns_matrix(b, mixed);
  GnsOperator gab = gns_matrix(compose(a, b), mixed);
  CHECK((gab.matrix - ga.matrix * gb.matrix).norm() < 1e-10);

  // also through a non-faithful state, using the compressed representation
  Mat pure = Mat::Zero(2, 2);
  pure(0, 0) = 1.0;
  NormalState ground(m2, {pure});
  ChannelMap ad = amplitude_damping(0.3);
  GnsOperator g1 = gns_matrix(ad, ground);
  GnsOperator g2 = gns_matrix(compose(ad, ad), ground);
  CHECK((g2.matrix - g1.matrix * g1.matrix).norm() < 1e-10);
}

TEST_CASE("for faithful states the gns matrix is a similarity") {
  BlockAlgebra m2 = BlockAlgebra::full(2);
  Rng rng(73);
  NormalState phi = rng.random_state(m2);
  ChannelMap deph = dephasing_channel(0.65);
  GnsOperator g = gns_matrix(deph, phi);
  Eigen::ComplexEigenSolver<Mat> e1(deph.superop), e2(g.matrix);
  std::vector<Complex> s1(e1.eigenvalues().data(), e1.eigenvalues().data() + 4);
  std::vector<Complex> s2(e2.eigenvalues().data(), e2.eigenvalues().data() + 4);
  CHECK(match_multisets(s1, s2, 1e-9).matched);
}

TEST_CASE("hypothesis diagnostic") {
  BlockAlgebra m2 = BlockAlgebra::full(2);
  NormalState mixed = NormalState::maximally_mixed(m2);
  StateFamily family = StateFamily::single(mixed);

  HypothesisDiagnostic id = verify_hypothesis(identity_channel(m2), family);
  CHECK(id.pass);
  CHECK(id.norms[0] == doctest::Approx(1.0).epsilon(1e-12));

  HypothesisDiagnostic deph = verify_hypothesis(dephasing_channel(0.75), family);
  CHECK(deph.pass);
  CHECK(deph.norms[0] <= 1.0 + 1e-9);

  ChannelMap twice =
      channel_from_superop(m2, 2.0 * Mat::Identity(4, 4), "2*identity");
  HypothesisDiagnostic fail = verify_hypothesis(twice, family);
  CHECK_FALSE(fail.pass);
  CHECK(fail.norms[0] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("hypothesis fails when the seminorm kernel moves") {
  // the preadjoint of amplitude damping pushes mass out of the kernel of
  // the excited state
  BlockAlgebra m2 = BlockAlgebra::full(2);
  Mat excited = Mat::Zero(2, 2);
  excited(1, 1) = 1.0;
  NormalState phi(m2, {excited});
  ChannelMap ad = amplitude_damping(0.4);
  HypothesisDiagnostic diag = verify_hypothesis(ad, StateFamily::single(phi));
  CHECK_FALSE(diag.pass);
  CHECK(diag.failure.find("L_phi") != std::string::npos);
}

TEST_CASE("peripheral spectra of T, T_* and T_phi coincide") {
  BlockAlgebra m2 = BlockAlgebra::full(2);
  NormalState mixed = NormalState::maximally_mixed(m2);

  PeripheralComparison deph =
      compare_peripheral_spectra(dephasing_channel(0.75), mixed);
  CHECK(deph.equal);
  CHECK(deph.on_algebra.size() == 2);
  for (Complex v : deph.on_algebra) CHECK(std::abs(v - Complex(1, 0)) < 1e-9);

  PeripheralComparison cyc =
      compare_peripheral_spectra(cycle_channel(3), uniform_classical(3));
  CHECK(cyc.equal);
  REQUIRE(cyc.on_algebra.size() == 3);
  std::vector<Complex> want{Complex(1, 0), std::polar(1.0, 2 * M_PI / 3),
                            std::polar(1.0, 4 * M_PI / 3)};
  CHECK(match_multisets(cyc.on_algebra, want, 1e-9).matched);
  CHECK(match_multisets(cyc.on_predual, want, 1e-9).matched);
  CHECK(match_multisets(cyc.on_gns, want, 1e-9).matched);

  PeripheralComparison fp = compare_peripheral_spectra(flip_pinch_channel(), mixed);
  CHECK(fp.equal);
  std::vector<Complex> pm{Complex(1, 0), Complex(-1, 0)};
  CHECK(match_multisets(fp.on_algebra, pm, 1e-9).matched);

  // refusal when the hypothesis fails
  ChannelMap twice =
      channel_from_superop(m2, 2.0 * Mat::Identity(4, 4), "2*identity");
  CHECK_THROWS_AS(compare_peripheral_spectra(twice, mixed), Error);
}
