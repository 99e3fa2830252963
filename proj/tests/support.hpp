#pragma once

#include <cmath>
#include <random>

#include "mbo/matgeom.hpp"

namespace mbo::test {

inline SmallMatrix gaussian_matrix(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  SmallMatrix a(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = g(rng);
  return a;
}

// Haar sample on O(n) by Gram-Schmidt on Gaussian columns.
inline SmallMatrix random_orthogonal(std::mt19937_64& rng, int n) {
  SmallMatrix a = gaussian_matrix(rng, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < j; ++k) {
      double p = 0.0;
      for (int i = 0; i < n; ++i) p += a(i, j) * a(i, k);
      for (int i = 0; i < n; ++i) a(i, j) -= p * a(i, k);
    }
    double nrm = 0.0;
    for (int i = 0; i < n; ++i) nrm += a(i, j) * a(i, j);
    nrm = std::sqrt(nrm);
    for (int i = 0; i < n; ++i) a(i, j) /= nrm;
  }
  return a;
}

// Determinant written out independently of the library.
inline double det_direct(const SmallMatrix& a) {
  if (a.n() == 1) return a(0, 0);
  if (a.n() == 2) return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
         a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

inline double dist2(const SmallMatrix& a, const SmallMatrix& b) {
  double s = 0.0;
  for (int i = 0; i < a.size(); ++i) s += (a.data()[i] - b.data()[i]) * (a.data()[i] - b.data()[i]);
  return s;
}

}  // namespace mbo::test
