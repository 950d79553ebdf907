#include "qda/eigapp.hpp"

#include <cmath>

#include "qda/errors.hpp"

namespace qda {

namespace {

void require_standard(const GeneralPencil& h) {
  h.validate();
  if (!(h.B == ComplexMatrix::identity(h.B.rows())))
    throw ContractViolation("normalized residuals are defined for B = I only");
}

void require_gamma(double gamma) {
  if (!(gamma < 0.0)) throw ContractViolation("Cayley parameter gamma must be negative");
}

}  // namespace

GeneralPencil cayley(const GeneralPencil& g, const CayleyParams& c) {
  require_gamma(c.gamma);
  g.validate();
  if (c.bypass) return g;
  return {g.A - c.gamma * g.B, g.A + c.gamma * g.B, g.m, g.n};
}

cplx cayley_map(cplx lambda, double gamma) { return (lambda - gamma) / (lambda + gamma); }

ComplexMatrix cayley_block(const ComplexMatrix& M, double gamma) {
  const ComplexMatrix shift = gamma * ComplexMatrix::identity(M.rows());
  return lu_solve(M + shift, M - shift);
}

double rho_gamma(const std::vector<cplx>& stableEigs, const std::vector<cplx>& antiStableEigs,
                 double gamma) {
  require_gamma(gamma);
  double r = 0.0;
  for (const cplx& l : stableEigs) r = std::max(r, std::abs(gamma - l) / std::abs(gamma + l));
  for (const cplx& l : antiStableEigs) r = std::max(r, std::abs(gamma + l) / std::abs(gamma - l));
  return r;
}

double nres1(const GeneralPencil& h, const ComplexMatrix& Z, std::optional<double> xNorm) {
  require_standard(h);
  const ComplexMatrix zh = Z.adjoint();
  const ComplexMatrix hz = h.A * Z;
  ComplexMatrix m;
  try {
    m = lu_solve(zh * Z, zh * hz);
  } catch (const SingularMatrix& e) {
    throw RankDeficient(e.pivot_index(), e.pivot_magnitude());
  }
  const double num = fro_norm(hz - Z * m);
  const double scale = xNorm ? std::max(1.0, *xNorm) : fro_norm(Z);
  return num / (scale * (two_norm_est(h.A) + two_norm_est(m)));
}

double nres2(const GeneralPencil& h, const ComplexMatrix& Z) {
  require_standard(h);
  const ComplexMatrix u = thin_qr(Z).q;
  const ComplexMatrix hu = h.A * u;
  const ComplexMatrix m = u.adjoint() * hu;
  const double num = fro_norm(hu - u * m);
  // U M U^H has the spectral norm of M, but its estimate does not depend on
  // which orthonormal basis of span(Z) the QR happened to return.
  const double mnorm = two_norm_est(u * (m * u.adjoint()));
  return num / (std::sqrt(static_cast<double>(Z.cols())) * (two_norm_est(h.A) + mnorm));
}

EigenspaceBases solve_halfplane(const GeneralPencil& g, const CayleyParams& c,
                                const QdaConfig& cfg) {
  EigenspaceBases out;
  out.transformed = cayley(g, c);
  out.source = run_qda(out.transformed, cfg);
  if (!out.source.phi.empty()) {
    out.stableBasis = stable_basis(out.source.Q1, out.source.phi);
    out.antiStableBasis = antistable_basis(out.source.Q2, out.source.psi);
  }
  return out;
}

}  // namespace qda
