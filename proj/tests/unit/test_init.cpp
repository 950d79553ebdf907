#include <doctest.h>

#include "helpers.hpp"
#include "qda/errors.hpp"
#include "qda/init.hpp"

using namespace qda;
using qt::rel_diff;

namespace {

// Largest eigenpair residual of the assembled reduced pencil over the
// generator's known eigenpairs.
double worst_eig_residual(const SfqPencil& p, const ProblemInstance& inst) {
  auto [A0, B0] = assemble(p);
  double worst = 0.0;
  for (const auto& ep : inst.eigenpairs)
    worst = std::max(worst, qt::eigpair_residual(A0, B0, ep.lambda, ep.z));
  return worst;
}

bool exact_sfq(const SfqPencil& p) {
  auto [A0, B0] = assemble(p);
  return is_exact_sfq(A0, B0, p.m, p.n, p.Q1, p.Q2);
}

}  // namespace

TEST_CASE("closed_form_init: already in SFQ form") {
  GeneralPencil g{ComplexMatrix{{2, 0}, {-1, 1}}, ComplexMatrix{{1, -3}, {0, 4}}, 1, 1};
  const SfqPencil p = closed_form_init(g, Permutation::identity(2), Permutation::identity(2));
  CHECK(p.E == ComplexMatrix{{2}});
  CHECK(p.X == ComplexMatrix{{1}});
  CHECK(p.Y == ComplexMatrix{{3}});
  CHECK(p.F == ComplexMatrix{{4}});
}

TEST_CASE("closed_form_init: decoupled") {
  const cplx a{0.3, 0.1}, b{2.0, -1.0};
  GeneralPencil g{ComplexMatrix{{a, 0}, {0, 1}}, ComplexMatrix{{1, 0}, {0, b}}, 1, 1};
  const SfqPencil p = closed_form_init(g, Permutation::identity(2), Permutation::identity(2));
  CHECK(p.E(0, 0) == a);
  CHECK(p.F(0, 0) == b);
  CHECK(p.X(0, 0) == cplx{});
  CHECK(p.Y(0, 0) == cplx{});
}

TEST_CASE("closed_form_init: explicit left factor") {
  Rng r(1, 0);
  GeneralPencil g{r.cnormal_matrix(6, 6), r.cnormal_matrix(6, 6), 3, 3};
  const SfqPencil p = closed_form_init(g, Permutation::identity(6), Permutation::identity(6));
  auto [A0, B0] = assemble(p);
  const ComplexMatrix P = solve_right(g.A, A0);
  CHECK(rel_diff(P * g.A, A0) <= 1e-10);
  CHECK(rel_diff(P * g.B, B0) <= 1e-10);
}

TEST_CASE("closed_form_init: inadmissible permutations") {
  // B'11 = 0 and A'12 = 0 make the mixed matrix singular.
  GeneralPencil g{ComplexMatrix{{1, 0}, {0, 1}}, ComplexMatrix{{0, 1}, {1, 0}}, 1, 1};
  CHECK_THROWS_AS(closed_form_init(g, Permutation::identity(2), Permutation::identity(2)),
                  SingularMatrix);
}

TEST_CASE("reductions: SFQ input keeps X0 and Y0") {
  SfqPencil p{2,
              2,
              ComplexMatrix{{0.5, 0.1}, {0.0, 0.4}},
              ComplexMatrix{{0.3, 0.0}, {0.2, 0.6}},
              ComplexMatrix{{0.2, -0.1}, {0.05, 0.3}},
              ComplexMatrix{{0.1, 0.2}, {-0.3, 0.1}},
              Permutation::identity(4),
              Permutation::identity(4)};
  const GeneralPencil g = assemble_general(p);
  for (InitIdea idea : {InitIdea::Idea1, InitIdea::Idea2, InitIdea::Idea3}) {
    const InitReport rep = reduce(g, idea, InitVariant::AFirst);
    CAPTURE(to_string(idea));
    CHECK(exact_sfq(rep.pencil));
    // Same Q1, Q2 (pivots never beat the unit entries), so the blocks agree.
    if (rep.pencil.Q1 == p.Q1 && rep.pencil.Q2 == p.Q2) {
      CHECK(rel_diff(rep.pencil.X, p.X) <= 1e-14);
      CHECK(rel_diff(rep.pencil.Y, p.Y) <= 1e-14);
    }
    CHECK(rep.maxAbsX == rep.pencil.X.max_abs());
    CHECK(rep.maxAbsY == rep.pencil.Y.max_abs());
  }
}

TEST_CASE("reductions: engineered breakdown") {
  // Last n rows of A' are zero: no A-side pivot exists.
  ComplexMatrix a(4, 4), b = ComplexMatrix::identity(4);
  a(0, 0) = 1.0;
  a(1, 1) = 1.0;
  GeneralPencil g{a, b, 2, 2};
  CHECK_THROWS_AS(reduce_idea1(g, InitVariant::AFirst), Breakdown);
}

TEST_CASE("reductions preserve generator eigenpairs") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const ProblemInstance inst = gen_disk_split(4, 5, 0.6, 0.6, seed);
    for (InitIdea idea : {InitIdea::Idea1, InitIdea::Idea2, InitIdea::Idea3})
      for (InitVariant v : {InitVariant::AFirst, InitVariant::BFirst}) {
        const InitReport rep = reduce(inst.pencil, idea, v);
        CAPTURE(to_string(idea));
        CAPTURE(to_string(v));
        CHECK(exact_sfq(rep.pencil));
        CHECK(worst_eig_residual(rep.pencil, inst) <= 1e-9);
        CHECK(std::isfinite(rep.pivotGrowth));
        CHECK(rep.idea == idea);
        CHECK(rep.variant == v);
      }
  }
}

TEST_CASE("Idea 3 against Idea 1 on a near-singular leading block (recorded)") {
  const ProblemInstance inst = gen_random_split(6, 6, 8.0, 1e-6, 3);
  const InitReport r1 = reduce_idea1(inst.pencil, InitVariant::AFirst);
  const InitReport r3 = reduce_idea3(inst.pencil, InitVariant::AFirst);
  MESSAGE("maxAbsX idea1 = " << r1.maxAbsX << ", idea3 = " << r3.maxAbsX);
  CHECK(std::isfinite(r3.maxAbsX));
}

TEST_CASE("reinit: preserves eigenpairs, tames a large entry, composes") {
  const ProblemInstance inst = gen_disk_split(4, 4, 0.5, 0.5, 7);
  SfqPencil p = reduce_idea3(inst.pencil, InitVariant::AFirst).pencil;
  const InitReport once = reinit(p);
  CHECK(exact_sfq(once.pencil));
  CHECK(worst_eig_residual(once.pencil, inst) <= 1e-9);
  const InitReport twice = reinit(once.pencil);
  CHECK(worst_eig_residual(twice.pencil, inst) <= 1e-9);

  // One huge entry in X.
  Rng r(9, 0);
  SfqPencil big = qt::random_pencil(r, 3, 3, false, 0.3);
  big.X(1, 2) = 1e6;
  const InitReport tamed = reinit(big);
  CHECK(tamed.maxAbsX < 1e3);
  auto [A, B] = assemble(big);
  auto [A1, B1] = assemble(tamed.pencil);
  const ComplexMatrix P = solve_right(A, A1);
  CHECK(rel_diff(P * B, B1) <= 1e-8);
}

TEST_CASE("fallback walks the idea list") {
  const ProblemInstance inst = gen_disk_split(3, 3, 0.5, 0.5, 11);
  const InitReport rep = reduce_with_fallback(inst.pencil, InitIdea::Idea1, InitVariant::BFirst);
  CHECK(rep.idea == InitIdea::Idea1);
  CHECK(rep.variant == InitVariant::BFirst);
}
