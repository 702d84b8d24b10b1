#ifndef JDLG_NUMERIC_HPP
#define JDLG_NUMERIC_HPP

#include <utility>
#include <vector>

#include "jdlg/algebra.hpp"

namespace jdlg {

// phase in [0, 2*pi)
double canonical_phase(Complex z);

// Sort order used everywhere eigenvalues are reported: descending
// modulus (quantized at 1e-9 so exact ties fall through), ties by phase
// ascending in [0, 2*pi). Returns the permutation applied.
std::vector<int> eigenvalue_sort_permutation(const std::vector<Complex>& vals);

struct MatchResult {
  bool matched = false;
  double max_distance = 0;
  std::vector<std::pair<int, int>> pairs;
};

// Greedy globally-closest bipartite matching between two multisets of
// complex numbers. matched is true when the sizes agree and every pair
// lies within tol.
MatchResult match_multisets(const std::vector<Complex>& a,
                            const std::vector<Complex>& b, double tol);

// Least-squares fit y ~ intercept + slope * x; returns {slope, intercept}.
std::pair<double, double> fit_line(const std::vector<double>& x,
                                   const std::vector<double>& y);

// Numerical rank with threshold relative to the largest singular value.
int svd_rank(const Mat& m, double rel_tol = 1e-8);

}  // namespace jdlg

#endif
