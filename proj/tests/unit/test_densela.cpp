#include <doctest.h>

#include "helpers.hpp"
#include "qda/errors.hpp"

using namespace qda;
using qt::rel_diff;

TEST_CASE("matmul: identity and row swap") {
  Rng r(7, 0);
  const ComplexMatrix a = r.cnormal_matrix(3, 3);
  CHECK(ComplexMatrix::identity(3) * a == a);

  const cplx a0{1, 2}, b0{3, -1}, c0{0, 5}, d0{-2, 0};
  const ComplexMatrix swap{{0, 1}, {1, 0}};
  const ComplexMatrix m{{a0, b0}, {c0, d0}};
  CHECK(swap * m == ComplexMatrix{{c0, d0}, {a0, b0}});
}

TEST_CASE("matmul: triple-loop oracle") {
  Rng r(11, 0);
  const ComplexMatrix a = r.cnormal_matrix(4, 3), b = r.cnormal_matrix(3, 5);
  ComplexMatrix ref(4, 5);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 5; ++j)
      for (std::size_t k = 0; k < 3; ++k) ref(i, j) += a(i, k) * b(k, j);
  const ComplexMatrix c = a * b;
  CHECK(c.rows() == 4);
  CHECK(c.cols() == 5);
  CHECK(rel_diff(c, ref) <= 1e-14);
  CHECK_THROWS_AS(b * b, ContractViolation);
}

TEST_CASE("matmul is associative") {
  Rng r(12, 0);
  const auto a = r.cnormal_matrix(5, 4), b = r.cnormal_matrix(4, 6), c = r.cnormal_matrix(6, 3);
  CHECK(rel_diff((a * b) * c, a * (b * c)) <= 1e-12);
}

TEST_CASE("lu_solve: examples") {
  Rng r(3, 0);
  const ComplexMatrix b = r.cnormal_matrix(4, 2);
  CHECK(rel_diff(lu_solve(ComplexMatrix::identity(4), b), b) == 0.0);

  const ComplexMatrix d{{2, 0}, {0, 4}};
  CHECK(lu_solve(d, ComplexMatrix{{2}, {8}}) == ComplexMatrix{{1}, {2}});

  const ComplexMatrix a = r.cnormal_matrix(6, 6) + 6.0 * ComplexMatrix::identity(6);
  const ComplexMatrix rhs = r.cnormal_matrix(6, 3);
  const ComplexMatrix x = lu_solve(a, rhs);
  CHECK(fro_norm(a * x - rhs) / fro_norm(rhs) <= 1e-12);
}

TEST_CASE("lu_solve recovers y from a y for moderate conditioning") {
  Rng r(5, 0);
  for (int t = 0; t < 20; ++t) {
    const ComplexMatrix a = r.cnormal_matrix(8, 8);
    const LuFactorization f(a);
    if (f.condition_estimate() > 1e6) continue;
    const ComplexMatrix y = r.cnormal_matrix(8, 2);
    CHECK(rel_diff(f.solve(a * y), y) <= 1e-10);
  }
}

TEST_CASE("lu: singular matrix reports the failing pivot") {
  const ComplexMatrix a{{1, 2}, {2, 4}};
  try {
    lu_solve(a, ComplexMatrix{{1}, {1}});
    FAIL("expected SingularMatrix");
  } catch (const SingularMatrix& e) {
    CHECK(e.pivot_index() == 1);
  }
}

TEST_CASE("solve_right: x a = b") {
  Rng r(8, 0);
  const ComplexMatrix a = r.cnormal_matrix(5, 5) + 5.0 * ComplexMatrix::identity(5);
  const ComplexMatrix b = r.cnormal_matrix(3, 5);
  CHECK(rel_diff(solve_right(a, b) * a, b) <= 1e-12);
}

TEST_CASE("thin_qr: examples") {
  ComplexMatrix z(4, 2);
  z(0, 0) = 1.0;
  z(1, 1) = 1.0;
  ThinQr qr = thin_qr(z);
  CHECK(rel_diff(qr.q, z) <= 1e-15);
  CHECK(rel_diff(qr.r, ComplexMatrix::identity(2)) <= 1e-15);

  qr = thin_qr(ComplexMatrix{{2}, {0}});
  CHECK(std::abs(std::abs(qr.q(0, 0)) - 1.0) <= 1e-15);
  CHECK(std::abs(qr.q(1, 0)) == 0.0);
  CHECK(std::abs(std::abs(qr.r(0, 0)) - 2.0) <= 1e-15);

  Rng r(4, 0);
  const ComplexMatrix w = r.cnormal_matrix(8, 3);
  qr = thin_qr(w);
  CHECK(fro_norm(qr.q.adjoint() * qr.q - ComplexMatrix::identity(3)) <= 1e-12);
  CHECK(fro_norm(qr.q * qr.r - w) <= 1e-12 * fro_norm(w));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < i; ++j) CHECK(qr.r(i, j) == cplx{});
}

TEST_CASE("thin_qr: rank deficiency") {
  const ComplexMatrix z{{1, 2}, {1, 2}, {1, 2}};
  CHECK_THROWS_AS(thin_qr(z), RankDeficient);
}

TEST_CASE("norms: examples") {
  MatrixNorms n = norms(ComplexMatrix::identity(4));
  CHECK(n.one == 1.0);
  CHECK(n.inf == 1.0);
  CHECK(n.fro == doctest::Approx(2.0));
  CHECK(n.two_est == 1.0);

  n = norms(ComplexMatrix{{3, 0}, {0, -4}});
  CHECK(n.one == 4.0);
  CHECK(n.inf == 4.0);
  CHECK(n.fro == doctest::Approx(5.0));
  CHECK(n.two_est == 4.0);
}

TEST_CASE("norms: two_est bounds the spectral norm (power iteration oracle)") {
  Rng r(9, 0);
  const ComplexMatrix a = r.cnormal_matrix(5, 5);
  const ComplexMatrix g = a.adjoint() * a;
  ComplexMatrix v = r.cnormal_matrix(5, 1);
  double lambda = 0.0;
  for (int k = 0; k < 500; ++k) {
    v = g * v;
    lambda = fro_norm(v);
    v *= 1.0 / lambda;
  }
  CHECK(two_norm_est(a) >= std::sqrt(lambda) * (1 - 1e-12));
}

TEST_CASE("permutations: rows, columns and exact round trips") {
  Rng r(2, 0);
  const ComplexMatrix a = r.cnormal_matrix(5, 4);
  CHECK(apply_perm_rows(Permutation::identity(5), a) == a);

  const Permutation sw = Permutation::transposition(2, 0, 1);
  CHECK(apply_perm_rows(sw, ComplexMatrix{{1}, {2}}) == ComplexMatrix{{2}, {1}});

  const Permutation p = qt::random_perm(r, 5);
  CHECK(apply_perm_rows(p, apply_perm_rows(p, a), true) == a);
  CHECK(apply_perm_rows(p.inverse(), apply_perm_rows(p, a)) == a);
  CHECK(compose(p, p.inverse()).is_identity());

  // Agreement with the explicit 0/1 matrix.
  CHECK(apply_perm_rows(p, a) == p.matrix() * a);
  const Permutation q = qt::random_perm(r, 4);
  CHECK(apply_perm_cols(q, a) == a * q.matrix());
  CHECK(apply_perm_cols(q, a, true) == a * q.matrix().transpose());
  CHECK(compose(p, qt::random_perm(r, 5)).size() == 5);
  const Permutation p2 = qt::random_perm(r, 5);
  CHECK(compose(p, p2).matrix() == p.matrix() * p2.matrix());

  CHECK_THROWS_AS(apply_perm_rows(q, a), ContractViolation);
  CHECK_THROWS_AS(Permutation({0, 0, 1}), ContractViolation);
}
