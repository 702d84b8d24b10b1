#include "jdlg/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace jdlg {

double canonical_phase(Complex z) {
  double p = std::arg(z);
  if (p < 0) p += 2.0 * M_PI;
  if (p >= 2.0 * M_PI) p = 0;
  return p;
}

std::vector<int> eigenvalue_sort_permutation(const std::vector<Complex>& vals) {
  std::vector<int> perm(vals.size());
  std::iota(perm.begin(), perm.end(), 0);
  auto key = [&](int i) {
    long long mod = std::llround(std::abs(vals[static_cast<size_t>(i)]) * 1e9);
    return std::make_tuple(-mod, canonical_phase(vals[static_cast<size_t>(i)]), i);
  };
  std::sort(perm.begin(), perm.end(),
            [&](int i, int j) { return key(i) < key(j); });
  return perm;
}

MatchResult match_multisets(const std::vector<Complex>& a,
                            const std::vector<Complex>& b, double tol) {
  MatchResult result;
  size_t n = std::min(a.size(), b.size());
  std::vector<bool> used_a(a.size(), false), used_b(b.size(), false);
  for (size_t step = 0; step < n; ++step) {
    double best = std::numeric_limits<double>::infinity();
    int bi = -1, bj = -1;
    for (size_t i = 0; i < a.size(); ++i) {
      if (used_a[i]) continue;
      for (size_t j = 0; j < b.size(); ++j) {
        if (used_b[j]) continue;
        double d = std::abs(a[i] - b[j]);
        if (d < best) {
          best = d;
          bi = static_cast<int>(i);
          bj = static_cast<int>(j);
        }
      }
    }
    used_a[static_cast<size_t>(bi)] = true;
    used_b[static_cast<size_t>(bj)] = true;
    result.pairs.emplace_back(bi, bj);
    result.max_distance = std::max(result.max_distance, best);
  }
  result.matched =
      a.size() == b.size() && (n == 0 || result.max_distance <= tol);
  return result;
}

std::pair<double, double> fit_line(const std::vector<double>& x,
                                   const std::vector<double>& y) {
  size_t n = std::min(x.size(), y.size());
  if (n < 2) return {0.0, n == 1 ? y[0] : 0.0};
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  double denom = n * sxx - sx * sx;
  if (denom == 0) return {0.0, sy / n};
  double slope = (n * sxy - sx * sy) / denom;
  double intercept = (sy - slope * sx) / n;
  return {slope, intercept};
}

int svd_rank(const Mat& m, double rel_tol) {
  Eigen::JacobiSVD<Mat> svd(m);
  if (svd.singularValues().size() == 0) return 0;
  double smax = svd.singularValues()(0);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > rel_tol * std::max(smax, 1e-300)) ++rank;
  return rank;
}

}  // namespace jdlg
