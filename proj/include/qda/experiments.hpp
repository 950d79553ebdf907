#pragma once
// Experiment harness: QDA against the SF1/SF2 baselines on generated
// families, the summary table, and convergence traces measured
// against generator ground truth.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qda/eigapp.hpp"
#include "qda/problems.hpp"

namespace qda {

enum class Algorithm { QDA, SDASF1, SDASF2 };
std::string to_string(Algorithm a);

struct AlgoRun {
  std::string caseLabel;
  Algorithm algorithm = Algorithm::QDA;
  bool ok = false;  // finished Converged with a usable basis
  std::string message;
  QdaResult result;
  double xFro = 0.0;
  double cpuSeconds = 0.0;
  double nres1 = -1.0;  // -1 when not computable
  double nres2 = -1.0;
};

// Half-plane problem (B = I) through the Cayley map with parameter gamma.
// The baselines run without the residual safeguard, as classical SDA does.
AlgoRun run_halfplane(const ProblemInstance& inst, Algorithm alg, double gamma,
                      const QdaConfig& cfg, std::string caseLabel = {});

struct EtaSweepConfig {
  std::size_t m = 50;
  std::size_t n = 60;
  double alpha = 8.0;
  std::vector<double> etas{1e-4, 1e-5, 1e-6, 1e-7};
  std::vector<std::uint64_t> seeds{1, 2, 3};
  double gamma = -1.0;
  std::optional<Algorithm> baseline = Algorithm::SDASF1;  // run next to QDA; none = QDA only
  QdaConfig cfg;
};
std::vector<AlgoRun> eta_sweep(const EtaSweepConfig& c);

struct BseConfig {
  std::size_t n = 64;
  double gapScale = 2.0;
  double couplingScale = 1.0;
  std::vector<std::uint64_t> seeds{1, 2, 3};
  double gamma = -1.0;
  std::optional<Algorithm> baseline = Algorithm::SDASF1;
  QdaConfig cfg;
};
std::vector<AlgoRun> bse_like(const BseConfig& c);

// Rows ||X||_F, CPU, NRes1, NRes2, #it'n; one column per run, "--" for
// failed runs.
std::string table_csv(const std::vector<AlgoRun>& runs);

// Phi expressed in the coordinates selected by Q1: Z2 Z1^{-1} with
// [Z1; Z2] = Q1 Z.
ComplexMatrix phi_in_coordinates(const ComplexMatrix& Z, const Permutation& Q1, std::size_t m);

struct TraceRow {
  std::size_t i = 0;
  double err = 0.0;    // ||X_i - Phi||_F in the iterate's own coordinates
  double normE = 0.0;  // two_est
  double normF = 0.0;
  double normX = 0.0;
  double absUpdateX = 0.0;
  double wCondition = 0.0;
  double wMinPivot = 0.0;
  bool clean = false;  // inside the asymptotic window
};

struct ConvergenceTrace {
  std::vector<TraceRow> rows;
  Status status = Status::MaxIter;
  std::string message;
};

// QDA directly on a disk-split instance with a stable ground-truth basis.
ConvergenceTrace trace_against_truth(const ProblemInstance& inst, const QdaConfig& cfg);

// Marks iterates in the asymptotic window: i >= 4, the update is below 1% of
// max(1, ||X_i||), and the roundoff amplified by the kernel condition,
// eps * cond(W) * max(1, ||X_i||), is still below 1% of the update.
void mark_asymptotic_window(ConvergenceTrace& t);

struct WindowSummary {
  std::size_t longest = 0;  // consecutive ratios with both ends clean
  double minRatio = 0.0;
  double maxRatio = 0.0;
};
WindowSummary summarize_window(const ConvergenceTrace& t);

// i,err,ratio,absUpdateX,normX,normE,normF,wCondition,wMinPivot,inWindow
std::string trace_csv(const ConvergenceTrace& t);

}  // namespace qda
