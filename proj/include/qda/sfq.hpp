#pragma once

// Pencils in Q-standard form:
//   A_i = [E 0; -X I] Q1,   B_i = [I -Y; 0 F] Q2,
// with E m x m, F n x n, X n x m, Y m x n and Q1, Q2 permutations of m+n.

#include <cstddef>
#include <utility>

#include "qda/densela.hpp"

namespace qda {

struct SfqPencil {
  std::size_t m = 0;
  std::size_t n = 0;
  ComplexMatrix E;
  ComplexMatrix F;
  ComplexMatrix X;
  ComplexMatrix Y;
  Permutation Q1;
  Permutation Q2;

  // Throws ContractViolation when block sizes disagree with (m, n).
  void validate() const;

  friend bool operator==(const SfqPencil&, const SfqPencil&) = default;
};

// Blocks of the permutation matrix Q1 Q2^T, partitioned (m, n) x (m, n).
struct QBlocks {
  ComplexMatrix Q11;
  ComplexMatrix Q12;
  ComplexMatrix Q21;
  ComplexMatrix Q22;
  Permutation product;  // Q1 Q2^T itself
};

struct GeneralPencil {
  ComplexMatrix A;
  ComplexMatrix B;
  std::size_t m = 0;
  std::size_t n = 0;

  void validate() const;
};

std::pair<ComplexMatrix, ComplexMatrix> assemble(const SfqPencil& p);
GeneralPencil assemble_general(const SfqPencil& p);

// Inverse of assemble: reads (E, F, X, Y) back out of A Q1^T and B Q2^T.
// The structural identity/zero blocks are not checked.
SfqPencil extract(const ComplexMatrix& A, const ComplexMatrix& B, std::size_t m, std::size_t n,
                  const Permutation& Q1, const Permutation& Q2);

// True when A Q1^T and B Q2^T carry exact I/0 blocks in the structural slots.
bool is_exact_sfq(const ComplexMatrix& A, const ComplexMatrix& B, std::size_t m, std::size_t n,
                  const Permutation& Q1, const Permutation& Q2);

QBlocks q_blocks(const Permutation& Q1, const Permutation& Q2, std::size_t m, std::size_t n);

// [0 I_m; I_n 0], of order m+n.
Permutation block_swap(std::size_t m, std::size_t n);

SfqPencil dual(const SfqPencil& p);

// ||A Q1^T Z - B Q1^T Z M||_F / max(1, ||Z||_F) with Z = [I; X].
double primal_eig_residual(const SfqPencil& p, const ComplexMatrix& X, const ComplexMatrix& M);
// ||A Q2^T Z N - B Q2^T Z||_F / max(1, ||Z||_F) with Z = [Y; I].
double dual_eig_residual(const SfqPencil& p, const ComplexMatrix& Y, const ComplexMatrix& N);

// a * q and q * a for a 0/1 matrix q with at most one 1 per row and column,
// done by moving entries.
ComplexMatrix times_q(const ComplexMatrix& a, const ComplexMatrix& q);
ComplexMatrix q_times(const ComplexMatrix& q, const ComplexMatrix& a);

// Subspace residual of span(Z) for A - lambda B: orthonormalize Z to U, fit
// M by least squares from B U M ~ A U, return
//   ||A U - B U M||_F / (sqrt(k) (||A||_2 + ||B||_2 ||M||_2))
// with two_est norms. For B = I this is the normalized residual on an
// orthonormal basis.
double subspace_residual(const GeneralPencil& g, const ComplexMatrix& Z);

double primal_nme_residual(const SfqPencil& p0, const ComplexMatrix& X);
double dual_nme_residual(const SfqPencil& p0, const ComplexMatrix& Y);

}  // namespace qda
