#pragma once

// One doubling step on an SFQ pencil, in the two equivalent kernels
// (n x n matrix W or m x m matrix W~), the classical SF1/SF2 kernels, and
// the stopping rules.

#include <span>

#include "qda/sfq.hpp"

namespace qda {

enum class Kernel { W, Wtilde, SF1, SF2 };

struct StepOutcome {
  SfqPencil next;
  double wConditionEstimate = 0.0;  // max/min pivot of the factorized kernel matrix
  double wMinPivot = 0.0;
  Kernel kernelUsed = Kernel::W;
};

struct EFXY {
  ComplexMatrix E, F, X, Y;
};

// W = Q22 - X Q12 + (Q21 - X Q11) Y
ComplexMatrix compute_W(const SfqPencil& p, const QBlocks& qb);
// W~ = Q11^T - Y Q12^T + (Q21^T - Y Q22^T) X
ComplexMatrix compute_Wt(const SfqPencil& p, const QBlocks& qb);

// Both throw Breakdown("W-solve") when the kernel matrix is singular.
StepOutcome step_w(const SfqPencil& p);
StepOutcome step_wt(const SfqPencil& p);
// W when n <= m, W~ otherwise.
Kernel preferred_kernel(const SfqPencil& p);
StepOutcome step(const SfqPencil& p, Kernel k);

// SDASF1: Q1 = Q2 = I.
EFXY step_sf1(const ComplexMatrix& E, const ComplexMatrix& F, const ComplexMatrix& X,
              const ComplexMatrix& Y);
// SDASF2: m = n, Q1 Q2^T = [0 I; I 0].
EFXY step_sf2(const ComplexMatrix& E, const ComplexMatrix& F, const ComplexMatrix& X,
              const ComplexMatrix& Y);

enum class StopMode { Plain, Kahan };

struct StopDecision {
  bool stop = false;
  bool kahanApplied = false;  // false when Kahan fell back to the plain rule
  double lhs = 0.0;
  double rhs = 0.0;
};

// diff = ||X_i - X_{i-1}||_F, prevDiff = ||X_{i-1} - X_{i-2}||_F (negative if
// unavailable), xnorm = ||X_i||_F.
StopDecision check_stop(double diff, double prevDiff, double xnorm, double rtol, StopMode mode);
StopDecision check_stop(std::span<const ComplexMatrix> historyOfX, double rtol, StopMode mode);

}  // namespace qda
