#pragma once

// Keeps the entries of X and Y bounded by tau during the doubling loop by
// swapping single columns into and out of the identity blocks, falling back
// to a full re-reduction when that is not enough.

#include <cstddef>
#include <optional>
#include <vector>

#include "qda/init.hpp"
#include "qda/sfq.hpp"

namespace qda {

// max{1e3, 10 sqrt(nm + 1)}
double default_tau(std::size_t m, std::size_t n);

struct GuardConfig {
  double tau = 0.0;                       // <= 0 selects default_tau(m, n)
  std::size_t maxActionsPerIteration = 0;  // 0 selects m + n
  bool escalateToReinit = true;
  bool enabled = true;
  InitIdea reinitIdea = InitIdea::Idea3;

  double tau_for(std::size_t m, std::size_t n) const { return tau > 0.0 ? tau : default_tau(m, n); }
  std::size_t actions_for(std::size_t m, std::size_t n) const {
    return maxActionsPerIteration ? maxActionsPerIteration : m + n;
  }
};

enum class GuardKind { ActionX, ActionY, Reinit };

struct GuardAction {
  GuardKind kind = GuardKind::ActionX;
  std::size_t j = 0;
  std::size_t l = 0;
  double maxBefore = 0.0;
  double maxAfter = 0.0;
};

struct GuardReport {
  std::vector<GuardAction> actionsApplied;
  bool compliant = true;  // max|X|, max|Y| <= tau at exit
};

struct Violation {
  bool inX = true;
  std::size_t j = 0;
  std::size_t l = 0;
  double magnitude = 0.0;
};

std::optional<Violation> find_violation(const SfqPencil& p, double tau);

// Swap column l of the leading block with column m+j of the identity block
// of A_i Q1^T, i.e. pivot on X(j, l). Throws ZeroPivot for a tiny X(j, l).
SfqPencil action_x(const SfqPencil& p, std::size_t j, std::size_t l);
// Mirror for B_i Q2^T, pivoting on Y(j, l).
SfqPencil action_y(const SfqPencil& p, std::size_t j, std::size_t l);

std::pair<SfqPencil, GuardReport> guard(const SfqPencil& p, const GuardConfig& cfg);

}  // namespace qda
