#include <doctest.h>

#include "helpers.hpp"
#include "qda/errors.hpp"
#include "qda/qguard.hpp"

using namespace qda;
using qt::rel_diff;

namespace {

SfqPencil scalar(cplx e, cplx f, cplx x, cplx y) {
  return {1, 1, {{e}}, {{f}}, {{x}}, {{y}}, Permutation::identity(2), Permutation::identity(2)};
}

double worst_eig_residual(const SfqPencil& p, const ProblemInstance& inst) {
  auto [A, B] = assemble(p);
  double w = 0.0;
  for (const auto& ep : inst.eigenpairs) w = std::max(w, qt::eigpair_residual(A, B, ep.lambda, ep.z));
  return w;
}

}  // namespace

TEST_CASE("default_tau: examples") {
  CHECK(default_tau(1, 1) == 1000.0);
  CHECK(default_tau(200, 250) == doctest::Approx(2236.09).epsilon(1e-6));
  CHECK(default_tau(10000, 10000) == doctest::Approx(1.0e5).epsilon(1e-6));
}

TEST_CASE("find_violation: examples and tie rule") {
  Rng r(1, 0);
  SfqPencil p = qt::random_pencil(r, 3, 4, false, 0.1);
  CHECK_FALSE(find_violation(p, 1e3).has_value());

  p.X(2, 1) = 2e3;
  auto v = find_violation(p, 1e3);
  REQUIRE(v.has_value());
  CHECK(v->inX);
  CHECK(v->j == 2);
  CHECK(v->l == 1);
  CHECK(v->magnitude == 2e3);

  p.Y(0, 3) = cplx(0.0, 2e3);
  v = find_violation(p, 1e3);
  REQUIRE(v.has_value());
  CHECK(v->inX);

  p.Y(0, 3) = 3e3;
  v = find_violation(p, 1e3);
  CHECK_FALSE(v->inX);
}

TEST_CASE("action_x: scalar example") {
  const cplx e{0.3, 0.1}, f{0.7, -0.2}, y{0.4, 0.0};
  const SfqPencil q = action_x(scalar(e, f, 5.0, y), 0, 0);
  CHECK(std::abs(q.X(0, 0) - 0.2) <= 1e-15);
  CHECK(std::abs(q.E(0, 0) - e / 5.0) <= 1e-15);
  CHECK(std::abs(q.F(0, 0) + f / 5.0) <= 1e-15);
  CHECK(std::abs(q.Y(0, 0) - (y - e * f / 5.0)) <= 1e-15);
  CHECK(q.Q1 == Permutation::transposition(2, 0, 1));
  CHECK(q.Q2.is_identity());
}

TEST_CASE("action_y: scalar mirror") {
  const cplx e{0.3, 0.1}, f{0.7, -0.2}, x{0.4, 0.0};
  const SfqPencil q = action_y(scalar(e, f, x, 5.0), 0, 0);
  CHECK(std::abs(q.Y(0, 0) - 0.2) <= 1e-15);
  CHECK(std::abs(q.F(0, 0) - f / 5.0) <= 1e-15);
  CHECK(std::abs(q.E(0, 0) + e / 5.0) <= 1e-15);
  CHECK(std::abs(q.X(0, 0) - (x - f * e / 5.0)) <= 1e-15);
  CHECK(q.Q2 == Permutation::transposition(2, 0, 1));
}

TEST_CASE("actions: zero pivot") {
  CHECK_THROWS_AS(action_x(scalar(1, 1, 0, 0), 0, 0), ZeroPivot);
  CHECK_THROWS_AS(action_y(scalar(1, 1, 0, 0), 0, 0), ZeroPivot);
}

TEST_CASE("actions: entry bounds after pivoting on the largest entry") {
  Rng r(2, 0);
  for (int t = 0; t < 100; ++t) {
    const std::size_t m = 1 + t % 6, n = 1 + (t / 6) % 6;
    SfqPencil p = qt::random_pencil(r, m, n, true);
    const std::size_t j = t % n, l = (t / 3) % m;
    p.X(j, l) = std::polar(1e4, r.uniform() * 6.283);
    const SfqPencil q = action_x(p, j, l);
    const double piv = std::abs(p.X(j, l));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < m; ++k) {
        const double a = std::abs(q.X(i, k));
        if (i == j && k == l) CHECK(a <= (1.0 / piv) * (1.0 + 1e-14));
        else if (i == j || k == l) CHECK(a <= 1.0 + 1e-12);
        // Sharp form of the remaining bound: |X_ik| + |X_il| |X_jk| / |X_jl|.
        else CHECK(a <= std::abs(p.X(i, k)) + std::abs(p.X(i, l)) * std::abs(p.X(j, k)) / piv + 1e-12);
      }
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = 0; k < n; ++k)
        CHECK(std::abs(q.Y(i, k)) <=
              std::abs(p.Y(i, k)) + std::abs(p.E(i, l)) * std::abs(p.F(j, k)) / piv + 1e-12);
  }
}

TEST_CASE("actions: the 2|X_ik| form fails when X_ik vanishes") {
  // X_ik = 0 with X_il, X_jk nonzero gives a nonzero updated entry.
  SfqPencil p{2,
              2,
              ComplexMatrix::identity(2),
              ComplexMatrix::identity(2),
              ComplexMatrix{{2e3, 1.0}, {1e3, 0.0}},
              ComplexMatrix(2, 2),
              Permutation::identity(4),
              Permutation::identity(4)};
  const SfqPencil q = action_x(p, 0, 0);
  CHECK(std::abs(q.X(1, 1)) == doctest::Approx(0.5));
}

TEST_CASE("actions preserve generator eigenpairs and keep exact permutations") {
  const ProblemInstance inst = gen_disk_split(3, 4, 0.5, 0.5, 3);
  SfqPencil p = reduce_idea3(inst.pencil, InitVariant::AFirst).pencil;
  for (std::size_t j = 0; j < p.n; ++j)
    for (std::size_t l = 0; l < p.m; ++l) {
      if (std::abs(p.X(j, l)) < 1e-3) continue;
      const SfqPencil q = action_x(p, j, l);
      CHECK(worst_eig_residual(q, inst) <= 1e-10);
    }
  for (std::size_t j = 0; j < p.m; ++j)
    for (std::size_t l = 0; l < p.n; ++l) {
      if (std::abs(p.Y(j, l)) < 1e-3) continue;
      const SfqPencil q = action_y(p, j, l);
      CHECK(worst_eig_residual(q, inst) <= 1e-10);
    }
  // A chain of actions.
  SfqPencil c = p;
  for (int k = 0; k < 6; ++k) c = k % 2 ? action_y(c, 0, 0) : action_x(c, 0, 0);
  CHECK(worst_eig_residual(c, inst) <= 1e-9);
  auto [A, B] = assemble(c);
  CHECK(is_exact_sfq(A, B, c.m, c.n, c.Q1, c.Q2));
}

TEST_CASE("guard: compliant, single action, escalation") {
  Rng r(4, 0);
  SfqPencil p = qt::random_pencil(r, 3, 3, false, 0.1);
  GuardConfig cfg;
  auto [same, rep] = guard(p, cfg);
  CHECK(same == p);
  CHECK(rep.actionsApplied.empty());
  CHECK(rep.compliant);

  p.X(1, 2) = 1e7;
  auto [one, rep1] = guard(p, cfg);
  REQUIRE(rep1.actionsApplied.size() == 1);
  CHECK(rep1.actionsApplied[0].kind == GuardKind::ActionX);
  CHECK(rep1.actionsApplied[0].j == 1);
  CHECK(rep1.actionsApplied[0].l == 2);
  CHECK(rep1.actionsApplied[0].maxBefore == 1e7);
  CHECK(rep1.compliant);
  CHECK(one.X.max_abs() <= 1e3);

  // Two violations with a budget of one action: the guard re-reduces.
  GuardConfig tight = cfg;
  tight.maxActionsPerIteration = 1;
  p.X(0, 0) = 5e6;
  p.Y(2, 1) = 4e6;
  auto [esc, rep2] = guard(p, tight);
  CHECK(rep2.actionsApplied.back().kind == GuardKind::Reinit);
  CHECK(rep2.compliant);

  GuardConfig off;
  off.enabled = false;
  CHECK(guard(p, off).first == p);
}
