#include "qda/doubling.hpp"

#include <cmath>
#include <optional>

#include "qda/errors.hpp"

namespace qda {

namespace {

LuFactorization factor_kernel(const ComplexMatrix& w) {
  try {
    return LuFactorization(w);
  } catch (const SingularMatrix& e) {
    const double scale = norms(w).inf;
    const double cond = e.pivot_magnitude() > 0.0 ? scale / e.pivot_magnitude()
                                                  : std::numeric_limits<double>::infinity();
    throw Breakdown("W-solve", cond);
  }
}

StepOutcome finish(SfqPencil next, const LuFactorization& lu, Kernel k) {
  StepOutcome out{std::move(next), lu.condition_estimate(), lu.min_pivot(), k};
  return out;
}

}  // namespace

ComplexMatrix compute_W(const SfqPencil& p, const QBlocks& qb) {
  return qb.Q22 - times_q(p.X, qb.Q12) + (qb.Q21 - times_q(p.X, qb.Q11)) * p.Y;
}

ComplexMatrix compute_Wt(const SfqPencil& p, const QBlocks& qb) {
  return qb.Q11.transpose() - times_q(p.Y, qb.Q12.transpose()) +
         (qb.Q21.transpose() - times_q(p.Y, qb.Q22.transpose())) * p.X;
}

StepOutcome step_w(const SfqPencil& p) {
  p.validate();
  const QBlocks qb = q_blocks(p.Q1, p.Q2, p.m, p.n);
  const LuFactorization lu = factor_kernel(compute_W(p, qb));
  const ComplexMatrix r1 = times_q(p.X, qb.Q11) - qb.Q21;  // X Q11 - Q21
  const ComplexMatrix l1 = q_times(qb.Q11, p.Y) + qb.Q12;  // Q11 Y + Q12
  const ComplexMatrix wr = lu.solve(r1);
  const ComplexMatrix wf = lu.solve(p.F);

  SfqPencil next = p;
  next.E = p.E * (qb.Q11 + l1 * wr) * p.E;
  next.F = p.F * wf;
  next.X = p.X + p.F * wr * p.E;
  next.Y = p.Y + p.E * l1 * wf;
  return finish(std::move(next), lu, Kernel::W);
}

StepOutcome step_wt(const SfqPencil& p) {
  p.validate();
  const QBlocks qb = q_blocks(p.Q1, p.Q2, p.m, p.n);
  const LuFactorization lu = factor_kernel(compute_Wt(p, qb));
  const ComplexMatrix q22t = qb.Q22.transpose();
  const ComplexMatrix r2 = q_times(q22t, p.X) + qb.Q12.transpose();  // Q22^T X + Q12^T
  const ComplexMatrix l2 = times_q(p.Y, q22t) - qb.Q21.transpose();  // Y Q22^T - Q21^T
  const ComplexMatrix we = lu.solve(p.E);
  const ComplexMatrix wl = lu.solve(l2);

  SfqPencil next = p;
  next.E = p.E * we;
  next.F = p.F * (q22t + r2 * wl) * p.F;
  next.X = p.X + p.F * r2 * we;
  next.Y = p.Y + p.E * wl * p.F;
  return finish(std::move(next), lu, Kernel::Wtilde);
}

Kernel preferred_kernel(const SfqPencil& p) { return p.n <= p.m ? Kernel::W : Kernel::Wtilde; }

StepOutcome step(const SfqPencil& p, Kernel k) {
  switch (k) {
    case Kernel::W:
      return step_w(p);
    case Kernel::Wtilde:
      return step_wt(p);
    default:
      throw ContractViolation("step: only W and W~ kernels act on a general SFQ pencil");
  }
}

EFXY step_sf1(const ComplexMatrix& E, const ComplexMatrix& F, const ComplexMatrix& X,
              const ComplexMatrix& Y) {
  const std::size_t m = E.rows(), n = F.rows();
  if (X.rows() != n || X.cols() != m || Y.rows() != m || Y.cols() != n)
    throw ContractViolation("step_sf1: block sizes disagree");
  const LuFactorization w = factor_kernel(ComplexMatrix::identity(n) - X * Y);
  const LuFactorization wt = factor_kernel(ComplexMatrix::identity(m) - Y * X);
  return {E * wt.solve(E), F * w.solve(F), X + F * w.solve(X) * E, Y + E * Y * w.solve(F)};
}

EFXY step_sf2(const ComplexMatrix& E, const ComplexMatrix& F, const ComplexMatrix& X,
              const ComplexMatrix& Y) {
  const std::size_t m = E.rows(), n = F.rows();
  if (m != n || X.rows() != n || X.cols() != m || Y.rows() != m || Y.cols() != n)
    throw ContractViolation("step_sf2: needs m == n and matching blocks");
  const LuFactorization xy = factor_kernel(X - Y);
  const LuFactorization yx = factor_kernel(Y - X);
  return {E * xy.solve(E), F * yx.solve(F), X + F * xy.solve(E), Y + E * yx.solve(F)};
}

StopDecision check_stop(double diff, double prevDiff, double xnorm, double rtol, StopMode mode) {
  StopDecision d;
  d.rhs = rtol * xnorm;
  if (mode == StopMode::Kahan && prevDiff >= 0.0 && prevDiff - diff > 0.0) {
    d.kahanApplied = true;
    d.lhs = diff * diff / (prevDiff - diff);
  } else {
    d.lhs = diff;
  }
  d.stop = d.lhs <= d.rhs;
  return d;
}

StopDecision check_stop(std::span<const ComplexMatrix> h, double rtol, StopMode mode) {
  if (h.size() < 2) throw ContractViolation("check_stop needs at least two iterates");
  const std::size_t k = h.size() - 1;
  const double diff = fro_norm(h[k] - h[k - 1]);
  const double prev = h.size() >= 3 ? fro_norm(h[k - 1] - h[k - 2]) : -1.0;
  return check_stop(diff, prev, fro_norm(h[k]), rtol, mode);
}

}  // namespace qda
