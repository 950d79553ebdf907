#pragma once

// Dense complex linear algebra kernels: row-major matrices, permutations,
// partial-pivoting LU, Householder thin QR and the norm set used for
// residual denominators.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace qda {

using cplx = std::complex<double>;

// Pivots smaller than this times ||a||_inf are treated as zero.
inline constexpr double kSingularityTol = 1e-13;

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  cplx& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  std::span<const cplx> entries() const noexcept { return entries_; }
  std::span<cplx> entries() noexcept { return entries_; }
  std::span<const cplx> row(std::size_t i) const { return {entries_.data() + i * cols_, cols_}; }
  std::span<cplx> row(std::size_t i) { return {entries_.data() + i * cols_, cols_}; }

  ComplexMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const ComplexMatrix& b);

  ComplexMatrix transpose() const;
  ComplexMatrix adjoint() const;

  ComplexMatrix& operator+=(const ComplexMatrix& b);
  ComplexMatrix& operator-=(const ComplexMatrix& b);
  ComplexMatrix& operator*=(cplx s);

  bool all_finite() const noexcept;
  double max_abs() const noexcept;

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> entries_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a);
ComplexMatrix operator*(cplx s, ComplexMatrix a);

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) { return matmul(a, b); }

// [top; bottom] and [left, right].
ComplexMatrix vstack(const ComplexMatrix& top, const ComplexMatrix& bottom);
ComplexMatrix hstack(const ComplexMatrix& left, const ComplexMatrix& right);

struct MatrixNorms {
  double one = 0.0;
  double inf = 0.0;
  double fro = 0.0;
  double two_est = 0.0;  // sqrt(one * inf), an upper bound on the spectral norm
};

MatrixNorms norms(const ComplexMatrix& a);
double fro_norm(const ComplexMatrix& a);
double two_norm_est(const ComplexMatrix& a);

// Row-pivoted LU, P*a = L*U. The factorization is kept so several
// right-hand sides can share it.
class LuFactorization {
 public:
  explicit LuFactorization(ComplexMatrix a, double singularity_tol = kSingularityTol);

  std::size_t order() const noexcept { return lu_.rows(); }
  ComplexMatrix solve(const ComplexMatrix& b) const;
  // x * a = b, i.e. x = b * a^{-1}.
  ComplexMatrix solve_right(const ComplexMatrix& b) const;

  double min_pivot() const noexcept { return min_pivot_; }
  double max_pivot() const noexcept { return max_pivot_; }
  double condition_estimate() const noexcept { return max_pivot_ / min_pivot_; }

 private:
  ComplexMatrix lu_;
  std::vector<std::size_t> pivots_;
  double min_pivot_ = 0.0;
  double max_pivot_ = 0.0;
};

ComplexMatrix lu_solve(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix solve_right(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix inverse(const ComplexMatrix& a);

struct ThinQr {
  ComplexMatrix q;  // rows x cols, orthonormal columns
  ComplexMatrix r;  // cols x cols, upper triangular, real non-negative diagonal
};

ThinQr thin_qr(const ComplexMatrix& z);

// Permutation of {0..N-1}. The associated matrix P has P(i, image[i]) = 1,
// so (P*v)[i] = v[image[i]].
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<std::size_t> image);

  static Permutation identity(std::size_t n);
  // Exchanges indices a and b.
  static Permutation transposition(std::size_t n, std::size_t a, std::size_t b);

  std::size_t size() const noexcept { return image_.size(); }
  std::size_t operator[](std::size_t i) const { return image_[i]; }
  const std::vector<std::size_t>& image() const noexcept { return image_; }

  Permutation inverse() const;
  ComplexMatrix matrix() const;
  bool is_identity() const noexcept;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::size_t> image_;
};

// Matrix product a*b of two permutation matrices.
Permutation compose(const Permutation& a, const Permutation& b);

// P*a (or P^T*a when transpose is set). Entry moves only.
ComplexMatrix apply_perm_rows(const Permutation& p, const ComplexMatrix& a, bool transpose = false);
// a*P (or a*P^T when transpose is set). Entry moves only.
ComplexMatrix apply_perm_cols(const Permutation& p, const ComplexMatrix& a, bool transpose = false);

}  // namespace qda
