#include <doctest.h>

#include "helpers.hpp"
#include "qda/eigapp.hpp"
#include "qda/errors.hpp"

using namespace qda;
using qt::rel_diff;

TEST_CASE("cayley: scalar map") {
  CHECK(std::abs(cayley_map(-3.0, -1.0) - 0.5) <= 1e-15);
  CHECK(std::abs(cayley_map(-1.0, -1.0)) == 0.0);
  CHECK(std::abs(cayley_map(0.0, -1.0) + 1.0) <= 1e-15);

  GeneralPencil g{ComplexMatrix{{-3}}, ComplexMatrix{{1}}, 1, 0};
  const GeneralPencil t = cayley(g, {-1.0});
  CHECK(t.A == ComplexMatrix{{-2}});
  CHECK(t.B == ComplexMatrix{{-4}});
  CHECK_THROWS_AS(cayley(g, {1.0}), ContractViolation);
}

TEST_CASE("cayley: eigenpairs map to (lambda - gamma)/(lambda + gamma)") {
  const ProblemInstance inst = gen_random_split(5, 6, 8.0, 1.0, 2);
  for (double gamma : {-1.0, -4.0}) {
    const GeneralPencil t = cayley(inst.pencil, {gamma});
    for (const auto& ep : inst.eigenpairs) {
      const cplx mu = cayley_map(ep.lambda, gamma);
      CHECK(qt::eigpair_residual(t.A, t.B, mu, ep.z) <= 1e-10);
    }
    // Block form: A' Z = B' Z M'.
    const ComplexMatrix& z = *inst.trueBasisStable;
    const ComplexMatrix mp = cayley_block(*inst.trueM, gamma);
    CHECK(fro_norm(t.A * z - t.B * z * mp) <= 1e-10 * fro_norm(t.A) * fro_norm(z));
  }
}

TEST_CASE("rho_gamma: examples") {
  CHECK(rho_gamma({-1.0}, {2.0}, -1.0) == doctest::Approx(1.0 / 3.0));
  const double a = 3.0, g = -1.0;
  const double expect = std::abs(g + a) / std::abs(g - a);
  CHECK(rho_gamma({-a}, {a}, g) == doctest::Approx(expect));
}

TEST_CASE("rho_gamma bounds the observed contraction") {
  const ProblemInstance inst = gen_random_split(6, 6, 8.0, 1.0, 3);
  const double rho = rho_gamma(inst.stableEigs, inst.antiStableEigs, -1.0);
  double lastE = 0.0;
  std::size_t lastI = 0;
  QdaConfig cfg;
  cfg.guard.enabled = false;
  cfg.rtol = 1e-12;
  const GeneralPencil t = cayley(inst.pencil, {-1.0});
  const SfqPencil p0 = reduce_idea3(t, InitVariant::AFirst).pencil;
  run_sfq(p0, cfg, &t, [&](const SfqPencil& p, const IterationRecord& rec) {
    lastE = two_norm_est(p.E);
    lastI = rec.index;
  });
  REQUIRE(lastI > 0);
  CHECK(std::pow(lastE, std::pow(2.0, -double(lastI))) <= rho + 0.05);
}

TEST_CASE("nres1 / nres2: exact, random and scaled bases") {
  const ProblemInstance inst = gen_random_split(4, 5, 8.0, 1.0, 4);
  const GeneralPencil& h = inst.pencil;
  const ComplexMatrix& z = *inst.trueBasisStable;
  CHECK(nres1(h, z) <= 1e-13);
  CHECK(nres2(h, z) <= 1e-14);
  Rng r(4, 0);
  const ComplexMatrix rz = r.cnormal_matrix(9, 4);
  CHECK(nres1(h, rz) > 1e-3);
  CHECK(nres2(h, rz) > 1e-3);

  // Z = [I; X] scaled by 10 with ||X|| fixed: identical value.
  const ComplexMatrix x = r.cnormal_matrix(5, 4);
  const ComplexMatrix zx = vstack(ComplexMatrix::identity(4), x);
  const double xn = fro_norm(x);
  CHECK(nres1(h, 10.0 * zx, xn) == doctest::Approx(10.0 * nres1(h, zx, xn)).epsilon(1e-10));
  CHECK(nres2(h, 10.0 * zx) == doctest::Approx(nres2(h, zx)).epsilon(1e-10));

  // Invariance under right multiplication.
  const ComplexMatrix t = r.cnormal_matrix(4, 4);
  CHECK(std::abs(nres2(h, zx * t) - nres2(h, zx)) <= 1e-10);
}

TEST_CASE("nres2: eigenvectors of a diagonal matrix") {
  ComplexMatrix d(4, 4);
  for (std::size_t i = 0; i < 4; ++i) d(i, i) = double(i) - 1.5;
  GeneralPencil h{d, ComplexMatrix::identity(4), 2, 2};
  ComplexMatrix z(4, 2);
  z(0, 0) = 1.0;
  z(1, 1) = 1.0;
  CHECK(nres2(h, z) == 0.0);
  CHECK(nres1(h, z) == 0.0);
  GeneralPencil bad{d, 2.0 * ComplexMatrix::identity(4), 2, 2};
  CHECK_THROWS_AS(nres2(bad, z), ContractViolation);
}

TEST_CASE("solve_halfplane: diagonal example and bypass") {
  GeneralPencil g{ComplexMatrix{{-1, 0}, {0, 2}}, ComplexMatrix::identity(2), 1, 1};
  const EigenspaceBases out = solve_halfplane(g, {-1.0}, QdaConfig{});
  REQUIRE(out.source.status == Status::Converged);
  CHECK(rel_diff(out.stableBasis, ComplexMatrix{{1}, {0}}) == 0.0);
  CHECK(rel_diff(out.antiStableBasis, ComplexMatrix{{0}, {1}}) == 0.0);

  GeneralPencil disk{ComplexMatrix{{0.5, 0}, {0, 3}}, ComplexMatrix::identity(2), 1, 1};
  const EigenspaceBases b = solve_halfplane(disk, {-1.0, true}, QdaConfig{});
  CHECK(b.transformed.A == disk.A);
  CHECK(b.transformed.B == disk.B);
  CHECK(rel_diff(b.stableBasis, ComplexMatrix{{1}, {0}}) == 0.0);
}

TEST_CASE("solve_halfplane: Hamiltonian instance") {
  const ProblemInstance inst = gen_bse_like(16, 2.0, 1);
  const EigenspaceBases out = solve_halfplane(inst.pencil, {-1.0}, QdaConfig{});
  REQUIRE(out.source.status == Status::Converged);
  CHECK(nres2(inst.pencil, out.stableBasis) <= 1e-12);
  CHECK(nres1(inst.pencil, out.stableBasis, fro_norm(out.source.phi)) <= 1e-12);
}
