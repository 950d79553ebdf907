#pragma once

// The QDA loop (init, doubling, guard, stop) and the SDASF1/SDASF2 baselines.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qda/doubling.hpp"
#include "qda/init.hpp"
#include "qda/qguard.hpp"

namespace qda {

enum class Status { Converged, MaxIter, Breakdown };

std::string to_string(Status s);
std::string to_string(Kernel k);

struct QdaConfig {
  double rtol = 1e-14;
  std::size_t maxIter = 50;
  StopMode stopMode = StopMode::Kahan;
  GuardConfig guard;
  InitIdea initIdea = InitIdea::Idea3;
  InitVariant initVariant = InitVariant::AFirst;
  // Before accepting a stop, require the subspace residual of the current
  // basis to be <= sqrt(rtol).
  bool residualSafeguard = true;
  // Forces a kernel; by default W when n <= m and W~ otherwise.
  std::optional<Kernel> kernel;
  // Breakdown recovery: one re-reduction, then one kernel switch.
  bool recoverFromBreakdown = true;

  void validate() const;
};

struct IterationRecord {
  std::size_t index = 0;  // i of the produced iterate X_i, starting at 1
  double absUpdateX = 0.0;
  double relUpdateX = 0.0;
  double normE = 0.0, normF = 0.0, normX = 0.0, normY = 0.0;  // Frobenius, before the guard
  double wCondition = 0.0;
  double wMinPivot = 0.0;
  Kernel kernel = Kernel::W;
  GuardReport guardEvents;
  bool recovered = false;  // a breakdown was repaired before this step
};

struct QdaResult {
  ComplexMatrix phi;
  ComplexMatrix psi;
  Permutation Q1;
  Permutation Q2;
  SfqPencil final;
  std::vector<IterationRecord> history;
  Status status = Status::MaxIter;
  std::string message;
  std::optional<InitReport> init;
  double safeguardResidual = -1.0;  // last evaluated, -1 if never

  std::size_t iterations() const { return history.size(); }
};

// Called after every accepted iteration with the post-guard pencil.
using IterationObserver = std::function<void(const SfqPencil&, const IterationRecord&)>;

// Doubling loop from an SFQ pencil. The residual safeguard is measured on
// `reference` when given, otherwise on the assembled p0.
QdaResult run_sfq(const SfqPencil& p0, const QdaConfig& cfg,
                  const GeneralPencil* reference = nullptr, const IterationObserver& obs = {});

// Full QDA from a general pencil with m eigenvalues inside the unit disk.
QdaResult run_qda(const GeneralPencil& g, const QdaConfig& cfg, const IterationObserver& obs = {});

// Baselines: fixed permutations, no guard, no recovery; non-finite iterates
// end the run with Status::Breakdown.
QdaResult run_sdasf1(const SfqPencil& p0, const QdaConfig& cfg, const IterationObserver& obs = {});
QdaResult run_sdasf2(const SfqPencil& p0, const QdaConfig& cfg, const IterationObserver& obs = {});

// Closed-form SF1/SF2 starting pencils from g (Q1 = Q2 = I, resp. Q1 = I and
// Q2 = [0 I; I 0]). Throw SingularMatrix when inadmissible.
SfqPencil sf1_initial(const GeneralPencil& g);
SfqPencil sf2_initial(const GeneralPencil& g);

// Basis matrices Q1^T [I; X] and Q2^T [Y; I].
ComplexMatrix stable_basis(const Permutation& Q1, const ComplexMatrix& X);
ComplexMatrix antistable_basis(const Permutation& Q2, const ComplexMatrix& Y);

}  // namespace qda
