#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "jdlg/corpus.hpp"
#include "jdlg/decomposition.hpp"
#include "jdlg/numeric.hpp"

using namespace jdlg;
using namespace jdlg::corpus;

TEST_CASE("classical cycles carry their ground truth") {
  CorpusEntry pure = classical_cycle(3);
  CHECK(pure.expected.ergodic);
  REQUIRE(pure.expected.order.has_value());
  CHECK(*pure.expected.order == 3);
  CHECK(pure.expected.peripheral.size() == 3);
  CHECK(pure.expected.stable_radius == 0.0);
  CHECK(pure.expected.dim_reversible == 3);

  CorpusEntry primitive = classical_cycle(1);
  CHECK(primitive.expected.peripheral.size() == 1);
  CHECK(primitive.expected.ergodic);

  CorpusEntry mixed = classical_cycle(2, {2}, 7);
  CHECK_FALSE(mixed.expected.ergodic);
  CHECK_FALSE(mixed.expected.order.has_value());
  CHECK(mixed.expected.dim_reversible == 3);
  std::vector<Complex> want{1.0, -1.0, 1.0};
  CHECK(match_multisets(mixed.expected.peripheral, want, 1e-12).matched);
  CHECK(mixed.expected.stable_radius > 0.1);
  CHECK(mixed.expected.stable_radius < 0.9);

  // the drawn lazy weight shows up as an exact eigenvalue
  SpectralData sd = eigendecompose(mixed.channel);
  CHECK(std::abs(sd.stable_radius - mixed.expected.stable_radius) < 1e-12);
}

TEST_CASE("cycle transition matrices are row and column stochastic") {
  CorpusEntry entry = classical_cycle(3, {3, 2}, 11);
  const Mat& m = entry.channel.superop;
  for (int i = 0; i < m.rows(); ++i) {
    Complex row = 0, col = 0;
    for (int j = 0; j < m.cols(); ++j) {
      row += m(i, j);
      col += m(j, i);
      CHECK(m(i, j).real() >= -1e-15);
      CHECK(std::abs(m(i, j).imag()) < 1e-15);
    }
    CHECK(std::abs(row - Complex(1, 0)) < 1e-12);
    CHECK(std::abs(col - Complex(1, 0)) < 1e-12);
  }
}

TEST_CASE("preset ground truths") {
  CorpusEntry fp = quantum_preset("flip_pinch");
  SpectralData sd = eigendecompose(fp.channel);
  std::vector<Complex> want{1.0, -1.0, 0.0, 0.0};
  CHECK(match_multisets(sd.eigenvalues, want, 1e-10).matched);
  CHECK(fp.expected.ergodic);
  CHECK(*fp.expected.order == 2);

  CorpusEntry deph = quantum_preset("dephasing");
  SpectralData dsd = eigendecompose(deph.channel);
  std::vector<Complex> dwant{1.0, 1.0, 0.5, 0.5};
  CHECK(match_multisets(dsd.eigenvalues, dwant, 1e-10).matched);
  CHECK_FALSE(deph.expected.ergodic);

  PresetParams p3;
  p3.n = 3;
  CorpusEntry cs = quantum_preset("clock_shift_mixture", p3);
  SpectralData csd = eigendecompose(cs.channel);
  CHECK(csd.peripheral.size() == 1);
  CHECK(std::abs(csd.stable_radius - cs.expected.stable_radius) < 1e-12);
  CHECK(cs.expected.stable_radius ==
        doctest::Approx(std::sqrt(3.0) / 3.0).epsilon(1e-12));

  CHECK_THROWS_AS(quantum_preset("not_a_preset"), Error);
}

TEST_CASE("dephasing at p = 1 degenerates to the identity") {
  PresetParams p;
  p.p = 1.0;
  CorpusEntry e = quantum_preset("dephasing", p);
  CHECK(e.expected.peripheral.size() == 4);
  CHECK(e.expected.stable_radius == 0.0);
  CHECK((e.channel.superop - Mat::Identity(4, 4)).norm() < 1e-12);
}

TEST_CASE("random unital mixtures are gapped, unital and self-adjoint") {
  PresetParams p;
  p.seed = 5;
  CorpusEntry e = quantum_preset("random_unital", p);
  CHECK(e.expected.ergodic);
  CHECK(e.expected.stable_radius < 0.96);
  CHECK(is_unital(e.channel));
  CHECK(is_completely_positive(e.channel).completely_positive);
  // symmetrized mixture: the superoperator is Hermitian
  CHECK((e.channel.superop - e.channel.superop.adjoint()).norm() < 1e-12);
}

TEST_CASE("generators are deterministic under a fixed seed") {
  CorpusEntry a = classical_cycle(3, {2}, 42);
  CorpusEntry b = classical_cycle(3, {2}, 42);
  CHECK((a.channel.superop - b.channel.superop).norm() == 0.0);
  CHECK(a.expected.stable_radius == b.expected.stable_radius);

  PresetParams p;
  p.seed = 9;
  CorpusEntry r1 = quantum_preset("random_unital", p);
  CorpusEntry r2 = quantum_preset("random_unital", p);
  CHECK((r1.channel.superop - r2.channel.superop).norm() == 0.0);
  CHECK(r1.provenance == r2.provenance);
}

TEST_CASE("every corpus entry passes the contraction hypothesis") {
  for (const CorpusEntry& entry : default_corpus()) {
    HypothesisDiagnostic hyp =
        verify_hypothesis(entry.channel, StateFamily::single(entry.state));
    INFO(entry.provenance);
    CHECK(hyp.pass);
    CHECK(entry.state.faithful());
    InvarianceDiagnostic inv = check_invariance(entry.channel, entry.state);
    CHECK(inv.max_residual < 1e-10);
  }
}

TEST_CASE("corpus expectations match the analysis pipeline") {
  for (const CorpusEntry& entry : default_corpus()) {
    INFO(entry.provenance);
    SpectralData sd = eigendecompose(entry.channel);
    std::vector<Complex> peripheral;
    for (int k : sd.peripheral)
      peripheral.push_back(sd.eigenvalues[static_cast<size_t>(k)]);
    CHECK(match_multisets(peripheral, entry.expected.peripheral, 1e-8).matched);
    CHECK(std::abs(sd.stable_radius - entry.expected.stable_radius) < 1e-8);
    JdlgSplit split = jdlg_split(entry.channel, entry.state);
    CHECK(split.dim_reversible() == entry.expected.dim_reversible);
  }
}
