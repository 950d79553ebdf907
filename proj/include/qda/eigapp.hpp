#pragma once

// Half-plane eigenspace problems through the Cayley map, and the two
// normalized residuals used to judge computed bases.

#include <complex>
#include <optional>
#include <vector>

#include "qda/driver.hpp"

namespace qda {

struct CayleyParams {
  double gamma = -1.0;  // must be negative
  bool bypass = false;  // the pencil is already split by the unit circle
};

struct EigenspaceBases {
  ComplexMatrix stableBasis;      // Q1^T [I; Phi]
  ComplexMatrix antiStableBasis;  // Q2^T [Psi; I]
  QdaResult source;
  GeneralPencil transformed;  // the pencil QDA actually ran on
};

// A' = A - gamma B, B' = A + gamma B; lambda maps to (lambda - gamma)/(lambda + gamma).
GeneralPencil cayley(const GeneralPencil& g, const CayleyParams& c);
cplx cayley_map(cplx lambda, double gamma);
// (M + gamma I)^{-1} (M - gamma I): the block with A' Z = B' Z M' when A Z = B Z M.
ComplexMatrix cayley_block(const ComplexMatrix& M, double gamma);

double rho_gamma(const std::vector<cplx>& stableEigs, const std::vector<cplx>& antiStableEigs,
                 double gamma);

// ||H Z - Z M||_F / (max(1, ||X||_F) (||H||_2 + ||M||_2)), M = (Z^H Z)^{-1} Z^H H Z.
// Without xNorm, ||Z||_F stands in for max(1, ||X||_F). Requires B = I.
double nres1(const GeneralPencil& h, const ComplexMatrix& Z,
             std::optional<double> xNorm = std::nullopt);
// ||H U - U (U^H H U)||_F / (sqrt(k) (||H||_2 + ||U^H H U||_2)) on U = orth(Z).
double nres2(const GeneralPencil& h, const ComplexMatrix& Z);

EigenspaceBases solve_halfplane(const GeneralPencil& g, const CayleyParams& c,
                                const QdaConfig& cfg);

}  // namespace qda
