#include "jdlg/asymptotics.hpp"

#include <cmath>

#include "jdlg/numeric.hpp"

namespace jdlg {

ChannelMap periodic_part(const ChannelMap& t, const JdlgSplit& split) {
  if (split.projection.rows() != t.superop.rows())
    throw Error(ErrorKind::structural, "split does not match the channel");
  ChannelMap s = channel_from_superop(
      t.algebra, t.superop * split.projection,
      t.name.empty() ? "periodic_part" : t.name + "_periodic");
  if (split.group_order) {
    Mat sh = s.power(*split.group_order);
    for (const AlgebraElement& r : split.reversible_basis) {
      Vec v = r.coords();
      if ((sh * v - v).norm() > 1e-8 * std::max(1.0, v.norm()))
        throw Error(ErrorKind::numeric,
                    "S^h is not the identity on the reversible part");
    }
  }
  return s;
}

ConvergenceReport convergence_report(const ChannelMap& t, const ChannelMap& s,
                                     const NormalState& phi, const JdlgSplit& split,
                                     int n_max, int probes, std::uint64_t seed) {
  if (n_max < 16)
    throw Error(ErrorKind::validation, "n_max must be at least 16");
  ConvergenceReport report;
  report.stable_radius = split.stable_radius;
  PhiGeometry geom(t.algebra, phi);
  int n = t.algebra.coord_dim();

  Mat tp = Mat::Identity(n, n), sp = Mat::Identity(n, n);
  for (int k = 1; k <= n_max; ++k) {
    tp = t.superop * tp;
    sp = s.superop * sp;
    report.difference_norms.push_back(geom.superop_norm(tp - sp));
  }

  // log-linear fit over the second half of the window that sits above the
  // numerical floor of the projection construction
  double head = report.difference_norms.front();
  double floor = std::max(1e-11, 1e-13 * std::max(head, 1.0));
  int last_above = -1;
  for (int k = 0; k < n_max; ++k)
    if (report.difference_norms[static_cast<size_t>(k)] > floor) last_above = k;
  if (last_above >= 3) {
    std::vector<double> xs, ys;
    for (int k = last_above / 2; k <= last_above; ++k) {
      xs.push_back(static_cast<double>(k + 1));
      ys.push_back(std::log(report.difference_norms[static_cast<size_t>(k)]));
    }
    report.fitted_rate = std::exp(fit_line(xs, ys).first);
  }

  // Cesaro absolute averages over probe pairs
  Rng rng(seed);
  auto run_probe = [&](const AlgebraElement& x, const AlgebraElement& weight,
                       const std::string& kind) {
    ConvergenceProbe probe;
    probe.kind = kind;
    Vec cur = x.coords();
    double acc = 0;
    for (int k = 0; k < n_max; ++k) {
      Complex pairing = 0;
      AlgebraElement e = AlgebraElement::from_coords(t.algebra, cur);
      for (int b = 0; b < t.algebra.num_blocks(); ++b)
        pairing += (weight.block(b) * e.block(b)).trace();
      acc += std::abs(pairing);
      probe.cesaro.push_back(acc / static_cast<double>(k + 1));
      cur = t.superop * cur;
    }
    std::vector<double> xs, ys;
    for (int k = n_max / 4; k < n_max; ++k)
      if (probe.cesaro[static_cast<size_t>(k)] > 1e-14) {
        xs.push_back(std::log(static_cast<double>(k + 1)));
        ys.push_back(std::log(probe.cesaro[static_cast<size_t>(k)]));
      }
    if (xs.size() >= 2) probe.loglog_slope = fit_line(xs, ys).first;
    report.probes.push_back(std::move(probe));
  };

  int n_stable = split.dim_stable();
  for (int p = 0; p < probes && n_stable > 0; ++p) {
    AlgebraElement x = AlgebraElement::zero(t.algebra);
    for (const AlgebraElement& sv : split.stable_basis)
      x = x + sv * rng.normal_complex();
    double nx = norm_phi(phi, x);
    if (nx > 0) x = x * Complex(1.0 / nx, 0);
    run_probe(x, rng.random_hermitian_element(t.algebra), "stable");
  }
  // reversible probes: peripheral directions with a nontrivial character
  for (const AlgebraElement& r : split.reversible_basis) {
    AlgebraElement moved = t.apply(r) - r;
    if (moved.frobenius_norm() > 1e-6) {
      run_probe(r, r.adjoint(), "reversible");
      break;
    }
  }
  return report;
}

}  // namespace jdlg
