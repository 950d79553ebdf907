#pragma once

#include <algorithm>
#include <numeric>

#include "qda/densela.hpp"
#include "qda/problems.hpp"
#include "qda/sfq.hpp"

namespace qt {

using namespace qda;

inline double rel_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  return fro_norm(a - b) / std::max(1.0, fro_norm(b));
}

inline Permutation random_perm(Rng& r, std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), 0);
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(r.uniform() * double(i));
    std::swap(v[i - 1], v[std::min(j, i - 1)]);
  }
  return Permutation(v);
}

inline SfqPencil random_pencil(Rng& r, std::size_t m, std::size_t n, bool randomQ = true,
                               double scale = 1.0) {
  SfqPencil p{m,
              n,
              scale * r.cnormal_matrix(m, m),
              scale * r.cnormal_matrix(n, n),
              scale * r.cnormal_matrix(n, m),
              scale * r.cnormal_matrix(m, n),
              randomQ ? random_perm(r, m + n) : Permutation::identity(m + n),
              randomQ ? random_perm(r, m + n) : Permutation::identity(m + n)};
  return p;
}

// ||A z - lambda B z|| / ((||A||_F + |lambda| ||B||_F) ||z||)
inline double eigpair_residual(const ComplexMatrix& A, const ComplexMatrix& B, cplx lambda,
                               const ComplexMatrix& z) {
  const double num = fro_norm(A * z - lambda * (B * z));
  return num / ((fro_norm(A) + std::abs(lambda) * fro_norm(B)) * fro_norm(z));
}

}  // namespace qt
