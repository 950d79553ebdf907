#pragma once

// Test pencils with known answers.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qda/sfq.hpp"

namespace qda {

struct Eigenpair {
  cplx lambda;
  ComplexMatrix z;  // (m+n) x 1
};

struct ProblemInstance {
  std::string family;
  std::vector<std::pair<std::string, double>> params;
  std::uint64_t seed = 0;
  GeneralPencil pencil;
  std::optional<ComplexMatrix> trueBasisStable;  // A Z = B Z trueM
  std::optional<ComplexMatrix> trueM;
  std::optional<ComplexMatrix> trueBasisAnti;  // A Z trueN = B Z
  std::optional<ComplexMatrix> trueN;
  std::vector<cplx> stableEigs, antiStableEigs, circleEigs;
  std::vector<Eigenpair> eigenpairs;  // finite eigenpairs known by construction
};

struct CriticalBlock {
  std::size_t size = 1;
  cplx omega{1.0, 0.0};  // |omega| = 1
};

struct CriticalSpec {
  std::size_t mPrime = 1;
  std::size_t nPrime = 1;
  std::vector<CriticalBlock> blocks;
  double rhoStable = 0.5;
  double rhoAnti = 0.5;

  std::size_t n0() const;
  void validate() const;
};

// Seeded generator; each named matrix draws from its own stream.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream);
  double normal();
  double uniform();  // [0, 1)
  cplx cnormal() { return {normal(), normal()}; }
  ComplexMatrix cnormal_matrix(std::size_t rows, std::size_t cols);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

// A = U T U^{-1}, B = I with T upper triangular: m eigenvalues with real part
// in (-alpha, 2-alpha), n in (alpha, 2+alpha); the top m x m block of U is
// scaled by eta.
ProblemInstance gen_random_split(std::size_t m, std::size_t n, double alpha, double eta,
                                 std::uint64_t seed);

// H = [A B; -conj(B) -conj(A)], A Hermitian, B complex symmetric, with a gap
// of at least gapScale between the spectrum and the imaginary axis.
// couplingScale != 1 replaces B by S diag(s) S^T (S random unitary, s graded
// from 1 down to couplingScale), which makes the SF1 basis [I; X] badly
// conditioned in non-coordinate directions.
ProblemInstance gen_bse_like(std::size_t n, double gapScale, std::uint64_t seed,
                             double couplingScale = 1.0);

// A = P^{-1} J_A U^{-1}, B = P^{-1} J_B U^{-1} with normal stable parts of
// spectral radius rhoStable (resp. rhoAnti for the reciprocal side) and
// Jordan blocks of size 2 m_j at each omega_j on the unit circle.
ProblemInstance gen_critical(const CriticalSpec& spec, std::uint64_t seed);

// gen_critical without circle blocks: a regular disk-split pencil.
ProblemInstance gen_disk_split(std::size_t m, std::size_t n, double rhoStable, double rhoAnti,
                               std::uint64_t seed);

// [J_p(omega)]^{2^i}. Throws Overflow past 1e300.
ComplexMatrix jordan_power(std::size_t p, cplx omega, std::size_t i);
// Top-right k x k block of [J_{2k}(omega)]^{2^i}.
ComplexMatrix gamma_block(std::size_t k, cplx omega, std::size_t i);

// ||A Z - B Z M||_F / (||A||_F ||Z||_F); 0 when the instance has no basis.
double ground_truth_residual(const ProblemInstance& inst);

}  // namespace qda
