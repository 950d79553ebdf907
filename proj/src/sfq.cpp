#include "qda/sfq.hpp"

#include <algorithm>
#include <cmath>

#include "qda/errors.hpp"

namespace qda {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw ContractViolation(what);
}

void check_dims(const ComplexMatrix& a, std::size_t r, std::size_t c, const char* what) {
  require(a.rows() == r && a.cols() == c, what);
}

}  // namespace

void SfqPencil::validate() const {
  check_dims(E, m, m, "E must be m x m");
  check_dims(F, n, n, "F must be n x n");
  check_dims(X, n, m, "X must be n x m");
  check_dims(Y, m, n, "Y must be m x n");
  require(Q1.size() == m + n && Q2.size() == m + n, "Q1, Q2 must have size m+n");
}

void GeneralPencil::validate() const {
  const std::size_t N = m + n;
  check_dims(A, N, N, "A must be (m+n) x (m+n)");
  check_dims(B, N, N, "B must be (m+n) x (m+n)");
}

std::pair<ComplexMatrix, ComplexMatrix> assemble(const SfqPencil& p) {
  p.validate();
  const std::size_t m = p.m, n = p.n, N = m + n;
  ComplexMatrix a(N, N), b(N, N);
  a.set_block(0, 0, p.E);
  a.set_block(m, 0, -p.X);
  for (std::size_t i = 0; i < n; ++i) a(m + i, m + i) = 1.0;
  for (std::size_t i = 0; i < m; ++i) b(i, i) = 1.0;
  b.set_block(0, m, -p.Y);
  b.set_block(m, m, p.F);
  return {apply_perm_cols(p.Q1, a), apply_perm_cols(p.Q2, b)};
}

GeneralPencil assemble_general(const SfqPencil& p) {
  auto [a, b] = assemble(p);
  return {std::move(a), std::move(b), p.m, p.n};
}

SfqPencil extract(const ComplexMatrix& A, const ComplexMatrix& B, std::size_t m, std::size_t n,
                  const Permutation& Q1, const Permutation& Q2) {
  const ComplexMatrix a = apply_perm_cols(Q1, A, true);
  const ComplexMatrix b = apply_perm_cols(Q2, B, true);
  SfqPencil p{m, n, a.block(0, 0, m, m), b.block(m, m, n, n), -a.block(m, 0, n, m),
              -b.block(0, m, m, n), Q1, Q2};
  return p;
}

bool is_exact_sfq(const ComplexMatrix& A, const ComplexMatrix& B, std::size_t m, std::size_t n,
                  const Permutation& Q1, const Permutation& Q2) {
  const ComplexMatrix a = apply_perm_cols(Q1, A, true);
  const ComplexMatrix b = apply_perm_cols(Q2, B, true);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (a(i, m + j) != cplx{}) return false;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (a(m + i, m + j) != cplx(i == j ? 1.0 : 0.0)) return false;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (b(i, j) != cplx(i == j ? 1.0 : 0.0)) return false;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (b(m + i, j) != cplx{}) return false;
  return true;
}

QBlocks q_blocks(const Permutation& Q1, const Permutation& Q2, std::size_t m, std::size_t n) {
  require(Q1.size() == m + n && Q2.size() == m + n, "q_blocks: permutation size != m+n");
  QBlocks qb;
  qb.product = compose(Q1, Q2.inverse());
  qb.Q11 = ComplexMatrix(m, m);
  qb.Q12 = ComplexMatrix(m, n);
  qb.Q21 = ComplexMatrix(n, m);
  qb.Q22 = ComplexMatrix(n, n);
  for (std::size_t i = 0; i < m + n; ++i) {
    const std::size_t j = qb.product[i];
    if (i < m && j < m) qb.Q11(i, j) = 1.0;
    else if (i < m) qb.Q12(i, j - m) = 1.0;
    else if (j < m) qb.Q21(i - m, j) = 1.0;
    else qb.Q22(i - m, j - m) = 1.0;
  }
  return qb;
}

Permutation block_swap(std::size_t m, std::size_t n) {
  std::vector<std::size_t> img(m + n);
  for (std::size_t i = 0; i < m; ++i) img[i] = n + i;
  for (std::size_t k = 0; k < n; ++k) img[m + k] = k;
  return Permutation(std::move(img));
}

SfqPencil dual(const SfqPencil& p) {
  p.validate();
  const Permutation pi = block_swap(p.m, p.n);
  const Permutation pit = pi.inverse();
  return SfqPencil{p.n, p.m, p.F, p.E, p.Y, p.X,
                   compose(compose(pit, p.Q2), pi), compose(compose(pit, p.Q1), pi)};
}

double primal_eig_residual(const SfqPencil& p, const ComplexMatrix& X, const ComplexMatrix& M) {
  require(X.rows() == p.n && X.cols() == p.m, "X must be n x m");
  require(M.rows() == p.m && M.cols() == p.m, "M must be m x m");
  const auto [a, b] = assemble(p);
  const ComplexMatrix z = apply_perm_rows(p.Q1, vstack(ComplexMatrix::identity(p.m), X), true);
  const double r = fro_norm(a * z - b * z * M);
  return r / std::max(1.0, fro_norm(z));
}

double dual_eig_residual(const SfqPencil& p, const ComplexMatrix& Y, const ComplexMatrix& N) {
  require(Y.rows() == p.m && Y.cols() == p.n, "Y must be m x n");
  require(N.rows() == p.n && N.cols() == p.n, "N must be n x n");
  const auto [a, b] = assemble(p);
  const ComplexMatrix z = apply_perm_rows(p.Q2, vstack(Y, ComplexMatrix::identity(p.n)), true);
  const double r = fro_norm(a * z * N - b * z);
  return r / std::max(1.0, fro_norm(z));
}

ComplexMatrix times_q(const ComplexMatrix& a, const ComplexMatrix& q) {
  require(a.cols() == q.rows(), "times_q: a.cols != q.rows");
  ComplexMatrix out(a.rows(), q.cols());
  for (std::size_t k = 0; k < q.rows(); ++k)
    for (std::size_t j = 0; j < q.cols(); ++j)
      if (q(k, j) != cplx{})
        for (std::size_t i = 0; i < a.rows(); ++i) out(i, j) = a(i, k);
  return out;
}

ComplexMatrix q_times(const ComplexMatrix& q, const ComplexMatrix& a) {
  require(q.cols() == a.rows(), "q_times: q.cols != a.rows");
  ComplexMatrix out(q.rows(), a.cols());
  for (std::size_t i = 0; i < q.rows(); ++i)
    for (std::size_t k = 0; k < q.cols(); ++k)
      if (q(i, k) != cplx{}) std::copy(a.row(k).begin(), a.row(k).end(), out.row(i).begin());
  return out;
}

double subspace_residual(const GeneralPencil& g, const ComplexMatrix& Z) {
  g.validate();
  require(Z.rows() == g.m + g.n && Z.cols() >= 1, "subspace_residual: Z has wrong row count");
  const ComplexMatrix u = thin_qr(Z).q;
  const ComplexMatrix au = g.A * u;
  const ComplexMatrix bu = g.B * u;
  const ThinQr f = thin_qr(bu);
  // M = R^{-1} Q^H A U; R is upper triangular, solved by back substitution.
  ComplexMatrix mm = f.q.adjoint() * au;
  const std::size_t k = mm.rows();
  for (std::size_t c = 0; c < mm.cols(); ++c)
    for (std::size_t i = k; i-- > 0;) {
      cplx s = mm(i, c);
      for (std::size_t j = i + 1; j < k; ++j) s -= f.r(i, j) * mm(j, c);
      mm(i, c) = s / f.r(i, i);
    }
  const double num = fro_norm(au - bu * mm);
  const double den = std::sqrt(static_cast<double>(Z.cols())) *
                     (two_norm_est(g.A) + two_norm_est(g.B) * two_norm_est(mm));
  return den > 0.0 ? num / den : num;
}

double primal_nme_residual(const SfqPencil& p0, const ComplexMatrix& X) {
  p0.validate();
  require(X.rows() == p0.n && X.cols() == p0.m, "X must be n x m");
  const QBlocks qb = q_blocks(p0.Q1, p0.Q2, p0.m, p0.n);
  const ComplexMatrix q11t = qb.Q11.transpose(), q12t = qb.Q12.transpose();
  const ComplexMatrix q21t = qb.Q21.transpose(), q22t = qb.Q22.transpose();
  const ComplexMatrix bracket = q11t - times_q(p0.Y, q12t) + (q21t - times_q(p0.Y, q22t)) * X;
  const ComplexMatrix lhs = p0.F * (q12t + q_times(q22t, X));
  const ComplexMatrix rhs = p0.X + solve_right(bracket, lhs) * p0.E;
  return fro_norm(X - rhs) / std::max(1.0, fro_norm(X));
}

double dual_nme_residual(const SfqPencil& p0, const ComplexMatrix& Y) {
  p0.validate();
  require(Y.rows() == p0.m && Y.cols() == p0.n, "Y must be m x n");
  const QBlocks qb = q_blocks(p0.Q1, p0.Q2, p0.m, p0.n);
  const ComplexMatrix bracket = qb.Q22 - times_q(p0.X, qb.Q12) + (qb.Q21 - times_q(p0.X, qb.Q11)) * Y;
  const ComplexMatrix lhs = p0.E * (qb.Q12 + q_times(qb.Q11, Y));
  const ComplexMatrix rhs = p0.Y + solve_right(bracket, lhs) * p0.F;
  return fro_norm(Y - rhs) / std::max(1.0, fro_norm(Y));
}

}  // namespace qda
