#include "jdlg/corpus.hpp"

#include <cmath>

#include "jdlg/numeric.hpp"

namespace jdlg {
namespace corpus {

namespace {

NormalState uniform_state(const BlockAlgebra& a) {
  return NormalState::maximally_mixed(a);
}

Mat clock_matrix(int n) {
  Mat c = Mat::Zero(n, n);
  for (int k = 0; k < n; ++k) c(k, k) = std::polar(1.0, 2.0 * M_PI * k / n);
  return c;
}

Mat shift_matrix(int n) {
  Mat s = Mat::Zero(n, n);
  for (int k = 0; k < n; ++k) s((k + 1) % n, k) = 1.0;
  return s;
}

}  // namespace

CorpusEntry classical_cycle(int h, const std::vector<int>& mixing_block_sizes,
                            std::uint64_t seed) {
  if (h < 1)
    throw Error(ErrorKind::validation, "cycle length must be positive");
  for (int m : mixing_block_sizes)
    if (m < 1)
      throw Error(ErrorKind::validation, "mixing block sizes must be positive");

  int d = h;
  for (int m : mixing_block_sizes) d += m;
  BlockAlgebra a = BlockAlgebra::classical(d);

  // Heisenberg action on functions: (Tf)(i) = sum_j M(i,j) f(j) with M
  // row-stochastic; the cycle reads the next site, mixing blocks are
  // lazy averaging maps.
  Mat m = Mat::Zero(d, d);
  for (int i = 0; i < h; ++i) m(i, (i + 1) % h) = 1.0;

  Rng rng(seed);
  double radius = 0;
  int off = h;
  std::vector<double> lazy;
  for (int size : mixing_block_sizes) {
    double stable_eig = 0;
    if (size > 1) {
      stable_eig = rng.uniform(0.2, 0.7);
      radius = std::max(radius, stable_eig);
    }
    lazy.push_back(stable_eig);
    double alpha = 1.0 - stable_eig;
    for (int i = 0; i < size; ++i)
      for (int j = 0; j < size; ++j) {
        double v = alpha / size + (i == j ? stable_eig : 0.0);
        m(off + i, off + j) = v;
      }
    off += size;
  }

  CorpusEntry entry{channel_from_superop(a, m), uniform_state(a), Expected{},
                    "", seed};
  for (int k = 0; k < h; ++k)
    entry.expected.peripheral.push_back(std::polar(1.0, 2.0 * M_PI * k / h));
  for (size_t b = 0; b < mixing_block_sizes.size(); ++b)
    entry.expected.peripheral.push_back(Complex(1, 0));
  entry.expected.dim_reversible =
      h + static_cast<int>(mixing_block_sizes.size());
  entry.expected.ergodic = mixing_block_sizes.empty();
  // group order detection is capped at 64; longer cycles report none
  if (entry.expected.ergodic && h <= 64) entry.expected.order = h;
  entry.expected.stable_radius = radius;

  entry.provenance = "classical_cycle(h=" + std::to_string(h);
  if (!mixing_block_sizes.empty()) {
    entry.provenance += ",mixing=";
    for (size_t i = 0; i < mixing_block_sizes.size(); ++i)
      entry.provenance += (i ? "+" : "") + std::to_string(mixing_block_sizes[i]);
    entry.provenance += ",seed=" + std::to_string(seed);
  }
  entry.provenance += ")";
  entry.channel.name = entry.provenance;
  return entry;
}

std::vector<std::string> preset_names() {
  return {"identity",     "dephasing",    "depolarize_to_mixed", "flip_pinch",
          "unitary_conj", "clock_shift_mixture", "random_unital"};
}

CorpusEntry quantum_preset(const std::string& name, const PresetParams& params) {
  int n = params.n;
  if (n < 1) throw Error(ErrorKind::validation, "block dimension must be positive");
  BlockAlgebra a = BlockAlgebra::full(n);
  CorpusEntry entry{identity_channel(a), uniform_state(a), Expected{}, name,
                    params.seed};

  if (name == "identity") {
    entry.channel = identity_channel(a);
    for (int k = 0; k < n * n; ++k) entry.expected.peripheral.push_back(1.0);
    entry.expected.dim_reversible = n * n;
    entry.expected.ergodic = n == 1;
    if (entry.expected.ergodic) entry.expected.order = 1;
    entry.expected.stable_radius = 0;
    entry.provenance = "identity(n=" + std::to_string(n) + ")";
  } else if (name == "dephasing") {
    double p = params.p;
    if (p < 0 || p > 1)
      throw Error(ErrorKind::validation, "dephasing weight must be in [0,1]");
    Mat z = Mat::Zero(2, 2);
    z(0, 0) = 1;
    z(1, 1) = -1;
    std::vector<Mat> kraus{std::sqrt(p) * Mat::Identity(2, 2),
                           std::sqrt(1 - p) * z};
    entry.channel = from_kraus(BlockAlgebra::full(2), kraus);
    entry.state = uniform_state(BlockAlgebra::full(2));
    double off_eig = 2 * p - 1;  // X and Y are scaled by 2p - 1
    entry.expected.peripheral = {1.0, 1.0};
    entry.expected.dim_reversible = 2;
    entry.expected.stable_radius = std::abs(off_eig);
    if (std::abs(off_eig) >= 1 - 1e-8) {
      entry.expected.peripheral.push_back(off_eig);
      entry.expected.peripheral.push_back(off_eig);
      entry.expected.dim_reversible = 4;
      entry.expected.stable_radius = 0;
    }
    entry.expected.ergodic = false;
    entry.provenance = "dephasing(p=" + std::to_string(p) + ")";
  } else if (name == "depolarize_to_mixed") {
    std::vector<Mat> kraus;
    double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Mat e = Mat::Zero(n, n);
        e(i, j) = scale;
        kraus.push_back(e);
      }
    entry.channel = from_kraus(a, kraus);
    entry.expected.peripheral = {1.0};
    entry.expected.dim_reversible = 1;
    entry.expected.ergodic = true;
    entry.expected.order = 1;
    entry.expected.stable_radius = 0;
    entry.provenance = "depolarize_to_mixed(n=" + std::to_string(n) + ")";
  } else if (name == "flip_pinch") {
    // T(x) = D(X x X) with D the diagonal pinching
    Mat k0 = Mat::Zero(2, 2), k1 = Mat::Zero(2, 2);
    k0(0, 1) = 1.0;  // E_00 X
    k1(1, 0) = 1.0;  // E_11 X
    entry.channel = from_kraus(BlockAlgebra::full(2), {k0, k1});
    entry.state = uniform_state(BlockAlgebra::full(2));
    entry.expected.peripheral = {1.0, -1.0};
    entry.expected.dim_reversible = 2;
    entry.expected.ergodic = true;
    entry.expected.order = 2;
    entry.expected.stable_radius = 0;
    entry.provenance = "flip_pinch";
  } else if (name == "unitary_conj") {
    Mat u = Mat::Zero(n, n);
    for (int k = 0; k < n; ++k) u(k, k) = std::polar(1.0, params.theta * k);
    entry.channel = from_kraus(a, {u});
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        entry.expected.peripheral.push_back(
            std::polar(1.0, params.theta * (i - j)));
    entry.expected.dim_reversible = n * n;
    entry.expected.ergodic = n == 1;
    entry.expected.stable_radius = 0;
    entry.provenance = "unitary_conj(n=" + std::to_string(n) +
                       ",theta=" + std::to_string(params.theta) + ")";
  } else if (name == "clock_shift_mixture") {
    double w = 1.0 / std::sqrt(3.0);
    std::vector<Mat> kraus{w * Mat::Identity(n, n), w * clock_matrix(n),
                           w * shift_matrix(n)};
    entry.channel = from_kraus(a, kraus);
    entry.expected.peripheral = {1.0};
    entry.expected.dim_reversible = 1;
    entry.expected.ergodic = n > 1;
    entry.expected.order = 1;
    // Weyl operators C^a S^b are eigenvectors with eigenvalue
    // (1 + w^a + w^{-b})/3, w = exp(2 pi i / n)
    double radius = 0;
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) {
        if (p == 0 && q == 0) continue;
        Complex mu = (1.0 + std::polar(1.0, 2.0 * M_PI * p / n) +
                      std::polar(1.0, -2.0 * M_PI * q / n)) /
                     3.0;
        radius = std::max(radius, std::abs(mu));
      }
    entry.expected.stable_radius = n > 1 ? radius : 0;
    if (n == 1) {
      entry.expected.dim_reversible = 1;
      entry.expected.ergodic = true;
    }
    entry.provenance = "clock_shift_mixture(n=" + std::to_string(n) + ")";
  } else if (name == "random_unital") {
    // convex combination of unitary conjugations, symmetrized with the
    // inverses so the superoperator is phi-self-adjoint (hence normal)
    std::uint64_t seed = params.seed;
    for (int attempt = 0; attempt < 64; ++attempt, ++seed) {
      Rng rng(seed * 0x9e3779b9ull + 1);
      Mat u1 = rng.random_unitary(n), u2 = rng.random_unitary(n);
      std::vector<Mat> kraus{0.5 * u1, 0.5 * u1.adjoint(), 0.5 * u2,
                             0.5 * u2.adjoint()};
      ChannelMap t = from_kraus(a, kraus);

      int nc = a.coord_dim();
      int fixed_dim = nc - svd_rank(t.superop - Mat::Identity(nc, nc), 1e-9);
      Eigen::ComplexEigenSolver<Mat> es(t.superop);
      std::vector<double> mods;
      for (int k = 0; k < nc; ++k) mods.push_back(std::abs(es.eigenvalues()(k)));
      std::sort(mods.rbegin(), mods.rend());
      double second = nc > 1 ? mods[1] : 0.0;
      if (fixed_dim != 1 || second > 0.95) continue;  // degenerate draw, reseed

      entry.channel = std::move(t);
      entry.seed = seed;
      entry.expected.peripheral = {1.0};
      entry.expected.dim_reversible = 1;
      entry.expected.ergodic = true;
      entry.expected.order = 1;
      entry.expected.stable_radius = second;
      entry.provenance = "random_unital(n=" + std::to_string(n) +
                         ",seed=" + std::to_string(seed) + ")";
      entry.channel.name = entry.provenance;
      return entry;
    }
    throw Error(ErrorKind::numeric,
                "no spectral-gap unitary mixture found near the given seed");
  } else {
    throw Error(ErrorKind::validation, "unknown preset: " + name);
  }
  entry.channel.name = entry.provenance;
  return entry;
}

std::vector<CorpusEntry> default_corpus() {
  std::vector<CorpusEntry> entries;
  for (int h = 2; h <= 7; ++h)
    entries.push_back(classical_cycle(h, {}, static_cast<std::uint64_t>(h)));
  entries.push_back(classical_cycle(2, {2}, 101));
  entries.push_back(classical_cycle(3, {3, 2}, 102));

  PresetParams p2;
  entries.push_back(quantum_preset("identity", p2));
  entries.push_back(quantum_preset("dephasing", p2));
  entries.push_back(quantum_preset("depolarize_to_mixed", p2));
  entries.push_back(quantum_preset("flip_pinch", p2));
  entries.push_back(quantum_preset("unitary_conj", p2));
  PresetParams p3;
  p3.n = 3;
  entries.push_back(quantum_preset("clock_shift_mixture", p3));
  PresetParams pr2;
  pr2.seed = 5;
  entries.push_back(quantum_preset("random_unital", pr2));
  PresetParams pr3;
  pr3.n = 3;
  pr3.seed = 7;
  entries.push_back(quantum_preset("random_unital", pr3));
  return entries;
}

}  // namespace corpus
}  // namespace jdlg
