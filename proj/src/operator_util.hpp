#pragma once

// Small helpers shared by the circle, sphere and Madore operator builders.

#include <vector>

#include "fuzzy_spectra/core.hpp"

namespace fuzzy::detail {

inline SparseMatrix from_triplets(std::size_t dim, const std::vector<Eigen::Triplet<cplx>>& t) {
  const auto n = static_cast<Eigen::Index>(dim);
  SparseMatrix m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

template <class F>
SparseMatrix diagonal(std::size_t dim, F&& entry) {
  std::vector<Eigen::Triplet<cplx>> t;
  t.reserve(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const cplx v = entry(i);
    if (v != cplx(0.0)) t.emplace_back(static_cast<int>(i), static_cast<int>(i), v);
  }
  return from_triplets(dim, t);
}

inline SparseMatrix identity(std::size_t dim) {
  return diagonal(dim, [](std::size_t) { return cplx(1.0); });
}

inline SparseMatrix commutator(const SparseMatrix& a, const SparseMatrix& b) {
  return SparseMatrix(a * b - b * a);
}

inline SparseMatrix power(const SparseMatrix& a, int exponent) {
  SparseMatrix result = identity(static_cast<std::size_t>(a.rows()));
  for (int i = 0; i < exponent; ++i) result = SparseMatrix(result * a);
  return result;
}

/// Spectral norm that is exactly zero when every stored entry is zero.
inline double norm_of(const SparseMatrix& m) {
  bool any = false;
  for (int k = 0; k < m.outerSize() && !any; ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it)
      if (it.value() != cplx(0.0)) {
        any = true;
        break;
      }
  if (!any) return 0.0;
  return spectral_norm(DenseMatrix(m));
}

}  // namespace fuzzy::detail
