#pragma once

// Reduction of a general pencil A' - lambda B' to Q-standard form.
//
// closed_form_init uses known permutations. The reduce_* functions discover
// Q1 and Q2 by pivoted elimination: reverse elimination on A' produces the
// [.. 0; .. I] half, forward elimination on B' the [I ..; 0 ..] half. The
// three ideas differ only in where pivots may be searched and in the order
// the two halves are processed.

#include <string>

#include "qda/sfq.hpp"

namespace qda {

enum class InitIdea { ClosedForm, Idea1, Idea2, Idea3 };
enum class InitVariant { AFirst, BFirst };

std::string to_string(InitIdea idea);
std::string to_string(InitVariant v);

struct InitReport {
  SfqPencil pencil;
  InitIdea idea = InitIdea::Idea3;
  InitVariant variant = InitVariant::AFirst;
  double maxAbsX = 0.0;
  double maxAbsY = 0.0;
  double pivotGrowth = 1.0;  // max |entry| seen during elimination / max initial |entry|
};

// Throws SingularMatrix when (Q1, Q2) is inadmissible for g.
SfqPencil closed_form_init(const GeneralPencil& g, const Permutation& Q1, const Permutation& Q2);

// Each throws Breakdown(stage) when no usable pivot is left in its window.
InitReport reduce_idea1(const GeneralPencil& g, InitVariant variant);
InitReport reduce_idea2(const GeneralPencil& g, InitVariant variant);
InitReport reduce_idea3(const GeneralPencil& g, InitVariant variant);
InitReport reduce(const GeneralPencil& g, InitIdea idea, InitVariant variant);

// Tries `idea` first, then Idea3 -> Idea2 -> Idea1 for the given variant,
// then the same list with the other variant. Rethrows the last Breakdown.
InitReport reduce_with_fallback(const GeneralPencil& g, InitIdea idea = InitIdea::Idea3,
                                InitVariant variant = InitVariant::AFirst);

// Re-reduces (A_i Q1^T, B_i Q2^T) and composes the new column moves into
// Q1 <- S1 Q1, Q2 <- S2 Q2.
InitReport reinit(const SfqPencil& p, InitIdea idea = InitIdea::Idea3,
                  InitVariant variant = InitVariant::AFirst);

}  // namespace qda
