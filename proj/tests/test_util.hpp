#pragma once

// Shared helpers for the unit suites: seeded generators and multiset
// comparison of complex value lists.

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "gamelab/spectral.hpp"

namespace testutil {

using gamelab::Complex;

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64{seed}; }

inline double uniform(std::mt19937_64& gen, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  return dist(gen);
}

inline gamelab::MatrixR random_matrix(std::mt19937_64& gen, std::size_t rows, std::size_t cols,
                                      double lo = -1.0, double hi = 1.0) {
  gamelab::MatrixR m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = uniform(gen, lo, hi);
  return m;
}

inline std::vector<double> random_vector(std::mt19937_64& gen, std::size_t n, double lo = -1.0,
                                         double hi = 1.0) {
  std::vector<double> v(n);
  for (double& x : v) x = uniform(gen, lo, hi);
  return v;
}

/// Greedy multiset match: every value in a has a distinct partner in b within
/// tol. Returns the largest matched distance, or infinity on failure.
inline double multiset_distance(std::vector<Complex> a, std::vector<Complex> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (const Complex& x : a) {
    std::size_t best = b.size();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < b.size(); ++i) {
      const double dist = std::abs(x - b[i]);
      if (dist < best_dist) {
        best_dist = dist;
        best = i;
      }
    }
    if (best == b.size()) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, best_dist);
    b.erase(b.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return worst;
}

inline bool multiset_close(const std::vector<Complex>& a, const std::vector<Complex>& b,
                           double tol) {
  return multiset_distance(a, b) <= tol;
}

}  // namespace testutil
