#include "qda/densela.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "qda/errors.hpp"

namespace qda {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw ContractViolation(what);
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  require(entries_.size() == rows * cols, "entry count does not match rows*cols");
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  entries_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    require(r.size() == cols_, "ragged initializer");
    entries_.insert(entries_.end(), r.begin(), r.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr,
                                   std::size_t nc) const {
  require(r0 + nr <= rows_ && c0 + nc <= cols_, "block out of range");
  ComplexMatrix b(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    std::copy_n(entries_.begin() + (r0 + i) * cols_ + c0, nc, b.entries_.begin() + i * nc);
  return b;
}

void ComplexMatrix::set_block(std::size_t r0, std::size_t c0, const ComplexMatrix& b) {
  require(r0 + b.rows_ <= rows_ && c0 + b.cols_ <= cols_, "set_block out of range");
  for (std::size_t i = 0; i < b.rows_; ++i)
    std::copy_n(b.entries_.begin() + i * b.cols_, b.cols_,
                entries_.begin() + (r0 + i) * cols_ + c0);
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = std::conj((*this)(i, j));
  return t;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& b) {
  require(rows_ == b.rows_ && cols_ == b.cols_, "dimension mismatch in +");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += b.entries_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& b) {
  require(rows_ == b.rows_ && cols_ == b.cols_, "dimension mismatch in -");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= b.entries_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (auto& v : entries_) v *= s;
  return *this;
}

bool ComplexMatrix::all_finite() const noexcept {
  return std::all_of(entries_.begin(), entries_.end(), [](const cplx& v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  });
}

double ComplexMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& v : entries_) m = std::max(m, std::abs(v));
  return m;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator-(ComplexMatrix a) { return a *= -1.0; }
ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  require(a.cols() == b.rows(), "matmul: a.cols != b.rows");
  const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
  ComplexMatrix c(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    auto crow = c.row(i);
    for (std::size_t p = 0; p < k; ++p) {
      const cplx aip = a(i, p);
      if (aip == cplx{}) continue;
      auto brow = b.row(p);
      for (std::size_t j = 0; j < m; ++j) crow[j] += aip * brow[j];
    }
  }
  return c;
}

ComplexMatrix vstack(const ComplexMatrix& top, const ComplexMatrix& bottom) {
  require(top.cols() == bottom.cols(), "vstack: column mismatch");
  ComplexMatrix s(top.rows() + bottom.rows(), top.cols());
  s.set_block(0, 0, top);
  s.set_block(top.rows(), 0, bottom);
  return s;
}

ComplexMatrix hstack(const ComplexMatrix& left, const ComplexMatrix& right) {
  require(left.rows() == right.rows(), "hstack: row mismatch");
  ComplexMatrix s(left.rows(), left.cols() + right.cols());
  s.set_block(0, 0, left);
  s.set_block(0, left.cols(), right);
  return s;
}

MatrixNorms norms(const ComplexMatrix& a) {
  MatrixNorms r;
  std::vector<double> colsum(a.cols(), 0.0);
  double fro2 = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double rowsum = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const double v = std::abs(a(i, j));
      rowsum += v;
      colsum[j] += v;
      fro2 += std::norm(a(i, j));
    }
    r.inf = std::max(r.inf, rowsum);
  }
  for (double c : colsum) r.one = std::max(r.one, c);
  r.fro = std::sqrt(fro2);
  r.two_est = std::sqrt(r.one * r.inf);
  return r;
}

double fro_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (const auto& v : a.entries()) s += std::norm(v);
  return std::sqrt(s);
}

double two_norm_est(const ComplexMatrix& a) { return norms(a).two_est; }

LuFactorization::LuFactorization(ComplexMatrix a, double singularity_tol) : lu_(std::move(a)) {
  require(lu_.rows() == lu_.cols(), "LU of a non-square matrix");
  const std::size_t n = lu_.rows();
  pivots_.resize(n);
  const double thresh = singularity_tol * norms(lu_).inf;
  min_pivot_ = n ? std::numeric_limits<double>::infinity() : 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(lu_(i, k));
      if (v > best) best = v, p = i;
    }
    if (!(best > thresh) || !std::isfinite(best)) throw SingularMatrix(k, best);
    pivots_[k] = p;
    if (p != k) std::swap_ranges(lu_.row(k).begin(), lu_.row(k).end(), lu_.row(p).begin());
    min_pivot_ = std::min(min_pivot_, best);
    max_pivot_ = std::max(max_pivot_, best);
    const cplx piv = lu_(k, k);
    auto rk = lu_.row(k);
    for (std::size_t i = k + 1; i < n; ++i) {
      auto ri = lu_.row(i);
      const cplx l = ri[k] / piv;
      ri[k] = l;
      if (l == cplx{}) continue;
      for (std::size_t j = k + 1; j < n; ++j) ri[j] -= l * rk[j];
    }
  }
}

ComplexMatrix LuFactorization::solve(const ComplexMatrix& b) const {
  const std::size_t n = order();
  require(b.rows() == n, "lu solve: b.rows != order");
  ComplexMatrix x = b;
  const std::size_t m = x.cols();
  for (std::size_t k = 0; k < n; ++k)
    if (pivots_[k] != k)
      std::swap_ranges(x.row(k).begin(), x.row(k).end(), x.row(pivots_[k]).begin());
  for (std::size_t i = 0; i < n; ++i) {
    auto xi = x.row(i);
    for (std::size_t k = 0; k < i; ++k) {
      const cplx l = lu_(i, k);
      if (l == cplx{}) continue;
      auto xk = x.row(k);
      for (std::size_t j = 0; j < m; ++j) xi[j] -= l * xk[j];
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    auto xi = x.row(i);
    for (std::size_t k = i + 1; k < n; ++k) {
      const cplx u = lu_(i, k);
      if (u == cplx{}) continue;
      auto xk = x.row(k);
      for (std::size_t j = 0; j < m; ++j) xi[j] -= u * xk[j];
    }
    const cplx d = lu_(i, i);
    for (std::size_t j = 0; j < m; ++j) xi[j] /= d;
  }
  return x;
}

ComplexMatrix LuFactorization::solve_right(const ComplexMatrix& b) const {
  // x a = b  <=>  a^T x^T = b^T. Solve with the transposed factors.
  const std::size_t n = order();
  require(b.cols() == n, "lu solve_right: b.cols != order");
  ComplexMatrix y = b.transpose();  // n x r
  const std::size_t r = y.cols();
  // a = P^T L U, so a^T = U^T L^T P. Solve U^T z = y, L^T w = z, x^T = P^T w.
  for (std::size_t i = 0; i < n; ++i) {
    auto yi = y.row(i);
    for (std::size_t k = 0; k < i; ++k) {
      const cplx u = lu_(k, i);
      if (u == cplx{}) continue;
      auto yk = y.row(k);
      for (std::size_t j = 0; j < r; ++j) yi[j] -= u * yk[j];
    }
    const cplx d = lu_(i, i);
    for (std::size_t j = 0; j < r; ++j) yi[j] /= d;
  }
  for (std::size_t i = n; i-- > 0;) {
    auto yi = y.row(i);
    for (std::size_t k = i + 1; k < n; ++k) {
      const cplx l = lu_(k, i);
      if (l == cplx{}) continue;
      auto yk = y.row(k);
      for (std::size_t j = 0; j < r; ++j) yi[j] -= l * yk[j];
    }
  }
  for (std::size_t k = n; k-- > 0;)
    if (pivots_[k] != k)
      std::swap_ranges(y.row(k).begin(), y.row(k).end(), y.row(pivots_[k]).begin());
  return y.transpose();
}

ComplexMatrix lu_solve(const ComplexMatrix& a, const ComplexMatrix& b) {
  require(a.rows() == a.cols(), "lu_solve: a not square");
  require(b.rows() == a.rows(), "lu_solve: b.rows != a.rows");
  return LuFactorization(a).solve(b);
}

ComplexMatrix solve_right(const ComplexMatrix& a, const ComplexMatrix& b) {
  require(a.rows() == a.cols(), "solve_right: a not square");
  require(b.cols() == a.rows(), "solve_right: b.cols != a.rows");
  return LuFactorization(a).solve_right(b);
}

ComplexMatrix inverse(const ComplexMatrix& a) {
  return lu_solve(a, ComplexMatrix::identity(a.rows()));
}

ThinQr thin_qr(const ComplexMatrix& z) {
  const std::size_t m = z.rows(), k = z.cols();
  require(m >= k, "thin_qr: more columns than rows");
  const double tol = kSingularityTol * std::max(fro_norm(z), std::numeric_limits<double>::min());
  // Work column-major on a copy for cache-friendly Householder sweeps.
  std::vector<std::vector<cplx>> col(k, std::vector<cplx>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < k; ++j) col[j][i] = z(i, j);

  std::vector<std::vector<cplx>> v(k);  // Householder vectors, v[j] covers rows j..m-1
  std::vector<double> beta(k, 0.0);
  ComplexMatrix r(k, k);
  for (std::size_t j = 0; j < k; ++j) {
    auto& x = col[j];
    double nrm2 = 0.0;
    for (std::size_t i = j; i < m; ++i) nrm2 += std::norm(x[i]);
    const double nrm = std::sqrt(nrm2);
    if (!(nrm > tol)) throw RankDeficient(j, nrm);
    const cplx x0 = x[j];
    const cplx phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : cplx{1.0};
    // H x = -phase*nrm*e_j with v = x + phase*nrm*e_j.
    std::vector<cplx> vj(x.begin() + static_cast<std::ptrdiff_t>(j), x.end());
    vj[0] += phase * nrm;
    double vnorm2 = 0.0;
    for (const auto& e : vj) vnorm2 += std::norm(e);
    beta[j] = 2.0 / vnorm2;
    v[j] = std::move(vj);
    r(j, j) = -phase * nrm;
    for (std::size_t c = j + 1; c < k; ++c) {
      auto& y = col[c];
      cplx s{};
      for (std::size_t i = j; i < m; ++i) s += std::conj(v[j][i - j]) * y[i];
      s *= beta[j];
      for (std::size_t i = j; i < m; ++i) y[i] -= s * v[j][i - j];
      r(j, c) = y[j];
    }
  }
  // Q = H_0 ... H_{k-1} [I_k; 0].
  std::vector<std::vector<cplx>> q(k, std::vector<cplx>(m));
  for (std::size_t c = 0; c < k; ++c) {
    auto& y = q[c];
    y[c] = 1.0;
    for (std::size_t j = std::min(c + 1, k); j-- > 0;) {
      cplx s{};
      for (std::size_t i = j; i < m; ++i) s += std::conj(v[j][i - j]) * y[i];
      s *= beta[j];
      for (std::size_t i = j; i < m; ++i) y[i] -= s * v[j][i - j];
    }
  }
  // Normalize so diag(R) is real positive: Q <- Q D, R <- D^* R.
  ThinQr out{ComplexMatrix(m, k), std::move(r)};
  for (std::size_t j = 0; j < k; ++j) {
    const cplx d = out.r(j, j) / std::abs(out.r(j, j));
    for (std::size_t c = j; c < k; ++c) out.r(j, c) *= std::conj(d);
    out.r(j, j) = std::abs(out.r(j, j));
    for (std::size_t i = 0; i < m; ++i) out.q(i, j) = q[j][i] * d;
  }
  return out;
}

Permutation::Permutation(std::vector<std::size_t> image) : image_(std::move(image)) {
  std::vector<bool> seen(image_.size(), false);
  for (std::size_t v : image_) {
    require(v < image_.size() && !seen[v], "not a permutation");
    seen[v] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::size_t> img(n);
  std::iota(img.begin(), img.end(), std::size_t{0});
  Permutation p;
  p.image_ = std::move(img);
  return p;
}

Permutation Permutation::transposition(std::size_t n, std::size_t a, std::size_t b) {
  require(a < n && b < n, "transposition index out of range");
  Permutation p = identity(n);
  std::swap(p.image_[a], p.image_[b]);
  return p;
}

Permutation Permutation::inverse() const {
  Permutation p;
  p.image_.resize(image_.size());
  for (std::size_t i = 0; i < image_.size(); ++i) p.image_[image_[i]] = i;
  return p;
}

ComplexMatrix Permutation::matrix() const {
  ComplexMatrix m(size(), size());
  for (std::size_t i = 0; i < size(); ++i) m(i, image_[i]) = 1.0;
  return m;
}

bool Permutation::is_identity() const noexcept {
  for (std::size_t i = 0; i < image_.size(); ++i)
    if (image_[i] != i) return false;
  return true;
}

Permutation compose(const Permutation& a, const Permutation& b) {
  require(a.size() == b.size(), "compose: size mismatch");
  // (AB)(i, j) = 1 iff j = image_B[image_A[i]].
  std::vector<std::size_t> img(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) img[i] = b[a[i]];
  return Permutation(std::move(img));
}

ComplexMatrix apply_perm_rows(const Permutation& p, const ComplexMatrix& a, bool transpose) {
  require(p.size() == a.rows(), "apply_perm_rows: length mismatch");
  ComplexMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    // (P a) row i = a row image[i]; (P^T a) row image[i] = a row i.
    const std::size_t src = transpose ? i : p[i];
    const std::size_t dst = transpose ? p[i] : i;
    std::copy(a.row(src).begin(), a.row(src).end(), out.row(dst).begin());
  }
  return out;
}

ComplexMatrix apply_perm_cols(const Permutation& p, const ComplexMatrix& a, bool transpose) {
  require(p.size() == a.cols(), "apply_perm_cols: length mismatch");
  ComplexMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto src = a.row(i);
    auto dst = out.row(i);
    // (a P) column image[k] = a column k; (a P^T) column k = a column image[k].
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (transpose)
        dst[k] = src[p[k]];
      else
        dst[p[k]] = src[k];
    }
  }
  return out;
}

}  // namespace qda
