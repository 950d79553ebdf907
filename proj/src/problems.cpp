#include "qda/problems.hpp"

#include <cmath>
#include <numbers>

#include "qda/errors.hpp"

namespace qda {

namespace {

// Stream ids, one per independently drawn object.
enum Stream : std::uint64_t {
  kStreamU = 1,
  kStreamT = 2,
  kStreamP = 3,
  kStreamStable = 4,
  kStreamAnti = 5,
  kStreamHermitian = 6,
  kStreamSymmetric = 7,
};

ComplexMatrix unitary(Rng& rng, std::size_t n) { return thin_qr(rng.cnormal_matrix(n, n)).q; }

// Q_a diag(s) Q_b with s in [1, 4], together with its inverse. Rejected and
// redrawn while the two_est condition estimate exceeds 1e3.
std::pair<ComplexMatrix, ComplexMatrix> well_conditioned(Rng& rng, std::size_t n) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    const ComplexMatrix qa = unitary(rng, n), qb = unitary(rng, n);
    ComplexMatrix d(n, n), dinv(n, n);
    for (std::size_t k = 0; k < n; ++k) {
      const double s = 1.0 + 3.0 * rng.uniform();
      d(k, k) = s;
      dinv(k, k) = 1.0 / s;
    }
    ComplexMatrix w = qa * d * qb;
    ComplexMatrix winv = qb.adjoint() * dinv * qa.adjoint();
    if (two_norm_est(w) * two_norm_est(winv) <= 1e3) return {std::move(w), std::move(winv)};
  }
  throw Breakdown("well-conditioned sampling");
}

// V diag(d) V^H with max |d| = rho exactly; returns (matrix, V, d).
struct NormalBlock {
  ComplexMatrix mat, v;
  std::vector<cplx> d;
};

NormalBlock normal_block(Rng& rng, std::size_t k, double rho) {
  NormalBlock b;
  b.v = unitary(rng, k);
  b.d.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double r = i == 0 ? 1.0 : 0.4 + 0.6 * rng.uniform();
    const double th = 2.0 * std::numbers::pi * rng.uniform();
    b.d[i] = std::polar(rho * r, th);
  }
  ComplexMatrix dm(k, k);
  for (std::size_t i = 0; i < k; ++i) dm(i, i) = b.d[i];
  b.mat = b.v * dm * b.v.adjoint();
  return b;
}

ComplexMatrix column(const ComplexMatrix& a, std::size_t c) { return a.block(0, c, a.rows(), 1); }

cplx ipow(cplx base, std::uint64_t e) {
  cplx r{1.0, 0.0};
  while (e) {
    if (e & 1u) r *= base;
    base *= base;
    e >>= 1u;
  }
  return r;
}

}  // namespace

std::size_t CriticalSpec::n0() const {
  std::size_t s = 0;
  for (const auto& b : blocks) s += b.size;
  return s;
}

void CriticalSpec::validate() const {
  if (mPrime + n0() == 0 || nPrime + n0() == 0) throw ContractViolation("empty split");
  if (!(rhoStable > 0.0 && rhoStable < 1.0 && rhoAnti > 0.0 && rhoAnti < 1.0))
    throw ContractViolation("spectral radii must lie in (0, 1)");
  for (const auto& b : blocks) {
    if (b.size == 0) throw ContractViolation("circle block of size 0");
    if (std::abs(std::abs(b.omega) - 1.0) > 1e-14) throw ContractViolation("omega must be unimodular");
  }
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  engine_.seed(seq);
}

double Rng::normal() { return normal_(engine_); }
double Rng::uniform() { return uniform_(engine_); }

ComplexMatrix Rng::cnormal_matrix(std::size_t rows, std::size_t cols) {
  ComplexMatrix a(rows, cols);
  for (auto& v : a.entries()) v = cnormal();
  return a;
}

ProblemInstance gen_random_split(std::size_t m, std::size_t n, double alpha, double eta,
                                 std::uint64_t seed) {
  if (!(alpha > 2.0)) throw ContractViolation("alpha must exceed 2");
  if (!(eta > 0.0)) throw ContractViolation("eta must be positive");
  if (m == 0 || n == 0) throw ContractViolation("m and n must be positive");
  const std::size_t N = m + n;
  Rng ru(seed, kStreamU), rt(seed, kStreamT);
  ComplexMatrix u = ru.cnormal_matrix(N, N);

  // Draw order mirrors triu(randn + 1i randn, 1), rand, randn.
  ComplexMatrix t(N, N);
  {
    ComplexMatrix g = rt.cnormal_matrix(N, N);
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = i + 1; j < N; ++j) t(i, j) = g(i, j);
    for (std::size_t i = 0; i < N; ++i)
      t(i, i) = i < m ? 2.0 * rt.uniform() - alpha : 2.0 * rt.uniform() + alpha;
    for (std::size_t i = 0; i < N; ++i) t(i, i) += cplx(0.0, rt.normal());
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) u(i, j) *= eta;

  ProblemInstance inst;
  inst.family = "split";
  inst.params = {{"m", double(m)}, {"n", double(n)}, {"alpha", alpha}, {"eta", eta}};
  inst.seed = seed;
  inst.pencil = {solve_right(u, u * t), ComplexMatrix::identity(N), m, n};
  inst.trueBasisStable = u.block(0, 0, N, m);
  inst.trueM = t.block(0, 0, m, m);
  for (std::size_t i = 0; i < N; ++i) (i < m ? inst.stableEigs : inst.antiStableEigs).push_back(t(i, i));
  // Eigenvectors of T by back substitution, mapped through U.
  for (std::size_t k = 0; k < N; ++k) {
    ComplexMatrix v(N, 1);
    v(k, 0) = 1.0;
    for (std::size_t j = k; j-- > 0;) {
      cplx s{};
      for (std::size_t l = j + 1; l <= k; ++l) s += t(j, l) * v(l, 0);
      v(j, 0) = -s / (t(j, j) - t(k, k));
    }
    inst.eigenpairs.push_back({t(k, k), u * v});
  }
  return inst;
}

ProblemInstance gen_bse_like(std::size_t n, double gapScale, std::uint64_t seed,
                             double couplingScale) {
  if (!(gapScale > 0.0)) throw ContractViolation("gapScale must be positive");
  if (!(couplingScale >= 0.0)) throw ContractViolation("couplingScale must be non-negative");
  if (n == 0) throw ContractViolation("n must be positive");
  Rng rh(seed, kStreamHermitian), rs(seed, kStreamSymmetric);

  // Hermitian perturbation and symmetric coupling, each scaled to 1-norm g/2.
  ComplexMatrix g = rh.cnormal_matrix(n, n);
  ComplexMatrix herm = 0.5 * (g + g.adjoint());
  ComplexMatrix c = rs.cnormal_matrix(n, n);
  ComplexMatrix sym = 0.5 * (c + c.transpose());
  const double half = 0.5 * gapScale;
  herm *= half / norms(herm).one;
  // Mis-scaled coupling: B = S diag(s) S^T with S a random unitary and s
  // running geometrically from 1 down to couplingScale. The grading sits in
  // random directions, so column scaling of the SF1 basis cannot undo it.
  if (couplingScale != 1.0) {
    const ComplexMatrix s = thin_qr(rs.cnormal_matrix(n, n)).q;
    ComplexMatrix sd = s;
    for (std::size_t j = 0; j < n; ++j) {
      const double t = n > 1 ? double(j) / double(n - 1) : 0.0;
      const double w = std::pow(couplingScale, t);
      for (std::size_t i = 0; i < n; ++i) sd(i, j) *= w;
    }
    sym = sd * s.transpose();
  }
  sym *= half / norms(sym).one;
  // Exact symmetry after scaling.
  for (std::size_t i = 0; i < n; ++i) {
    herm(i, i) = herm(i, i).real();
    for (std::size_t j = 0; j < i; ++j) {
      herm(i, j) = std::conj(herm(j, i));
      sym(i, j) = sym(j, i);
    }
  }
  ComplexMatrix a = herm;
  for (std::size_t k = 0; k < n; ++k)
    a(k, k) += gapScale * (n > 1 ? 2.0 + 4.0 * double(k) / double(n - 1) : 2.0);

  ComplexMatrix h(2 * n, 2 * n);
  ComplexMatrix abar(n, n), bbar(n, n);
  for (std::size_t i = 0; i < n * n; ++i) {
    abar.entries()[i] = std::conj(a.entries()[i]);
    bbar.entries()[i] = std::conj(sym.entries()[i]);
  }
  h.set_block(0, 0, a);
  h.set_block(0, n, sym);
  h.set_block(n, 0, -bbar);
  h.set_block(n, n, -abar);

  ProblemInstance inst;
  inst.family = "bse";
  inst.params = {{"n", double(n)}, {"gapScale", gapScale}, {"couplingScale", couplingScale}};
  inst.seed = seed;
  // The stable subspace belongs to -conj(A) (bottom half), so m = n.
  inst.pencil = {std::move(h), ComplexMatrix::identity(2 * n), n, n};
  return inst;
}

ProblemInstance gen_critical(const CriticalSpec& spec, std::uint64_t seed) {
  spec.validate();
  const std::size_t mp = spec.mPrime, np = spec.nPrime, n0 = spec.n0();
  const std::size_t m = mp + n0, n = np + n0, N = m + n;
  const std::size_t o2 = mp, o3 = mp + n0, o4 = mp + n0 + np;

  Rng rp(seed, kStreamP), ru(seed, kStreamU), rs(seed, kStreamStable), ra(seed, kStreamAnti);
  const auto [pinv, pmat] = well_conditioned(rp, N);
  const auto [u, uinv] = well_conditioned(ru, N);
  const NormalBlock ms = mp ? normal_block(rs, mp, spec.rhoStable) : NormalBlock{};
  const NormalBlock na = np ? normal_block(ra, np, spec.rhoAnti) : NormalBlock{};
  (void)pmat;

  ComplexMatrix ja(N, N), jb = ComplexMatrix::identity(N), j1(n0, n0);
  if (mp) ja.set_block(0, 0, ms.mat);
  for (std::size_t i = 0; i < np; ++i) ja(o3 + i, o3 + i) = 1.0;
  if (np) jb.set_block(o3, o3, na.mat);
  for (std::size_t b = 0, off = 0; b < spec.blocks.size(); off += spec.blocks[b].size, ++b) {
    const auto& blk = spec.blocks[b];
    for (std::size_t i = 0; i < blk.size; ++i) {
      j1(off + i, off + i) = blk.omega;
      if (i + 1 < blk.size) j1(off + i, off + i + 1) = 1.0;
    }
    // Gamma_0 couples the last row of the first half to the first column of the second.
    ja(o2 + off + blk.size - 1, o4 + off) = 1.0;
  }
  if (n0) {
    ja.set_block(o2, o2, j1);
    ja.set_block(o4, o4, j1);
  }

  ProblemInstance inst;
  inst.family = n0 ? "critical" : "disk";
  inst.params = {{"mPrime", double(mp)}, {"nPrime", double(np)}, {"n0", double(n0)},
                 {"rhoStable", spec.rhoStable}, {"rhoAnti", spec.rhoAnti}};
  inst.seed = seed;
  inst.pencil = {pinv * ja * uinv, pinv * jb * uinv, m, n};
  inst.trueBasisStable = u.block(0, 0, N, m);
  ComplexMatrix tm(m, m);
  if (mp) tm.set_block(0, 0, ms.mat);
  if (n0) tm.set_block(mp, mp, j1);
  inst.trueM = tm;
  if (n0 == 0) {
    inst.trueBasisAnti = u.block(0, m, N, n);
    inst.trueN = na.mat;
  }

  for (std::size_t k = 0; k < mp; ++k) {
    inst.stableEigs.push_back(ms.d[k]);
    ComplexMatrix v(N, 1);
    v.set_block(0, 0, column(ms.v, k));
    inst.eigenpairs.push_back({ms.d[k], u * v});
  }
  for (std::size_t k = 0; k < np; ++k) {
    const cplx lam = 1.0 / na.d[k];
    inst.antiStableEigs.push_back(lam);
    ComplexMatrix v(N, 1);
    v.set_block(o3, 0, column(na.v, k));
    inst.eigenpairs.push_back({lam, u * v});
  }
  for (std::size_t b = 0, off = 0; b < spec.blocks.size(); off += spec.blocks[b].size, ++b) {
    for (std::size_t i = 0; i < 2 * spec.blocks[b].size; ++i)
      inst.circleEigs.push_back(spec.blocks[b].omega);
    inst.eigenpairs.push_back({spec.blocks[b].omega, column(u, o2 + off)});
  }
  return inst;
}

ProblemInstance gen_disk_split(std::size_t m, std::size_t n, double rhoStable, double rhoAnti,
                               std::uint64_t seed) {
  CriticalSpec spec;
  spec.mPrime = m;
  spec.nPrime = n;
  spec.rhoStable = rhoStable;
  spec.rhoAnti = rhoAnti;
  return gen_critical(spec, seed);
}

ComplexMatrix jordan_power(std::size_t p, cplx omega, std::size_t i) {
  if (p < 1) throw ContractViolation("jordan_power: p must be at least 1");
  if (i > 62) throw ContractViolation("jordan_power: i too large");
  const std::uint64_t P = std::uint64_t{1} << i;
  // gamma_j = C(P, j-1) omega^{P-j+1}, j = 1..p.
  std::vector<cplx> g(p);
  double binom = 1.0;
  for (std::size_t t = 0; t < p; ++t) {
    if (t > 0) binom = t > P ? 0.0 : binom * double(P - t + 1) / double(t);
    g[t] = t > P ? cplx{} : binom * ipow(omega, P - t);
    if (!std::isfinite(std::abs(g[t])) || std::abs(g[t]) > 1e300)
      throw Overflow("jordan_power: entry " + std::to_string(t + 1) + " exceeds 1e300");
  }
  ComplexMatrix j(p, p);
  for (std::size_t r = 0; r < p; ++r)
    for (std::size_t c = r; c < p; ++c) j(r, c) = g[c - r];
  return j;
}

ComplexMatrix gamma_block(std::size_t k, cplx omega, std::size_t i) {
  return jordan_power(2 * k, omega, i).block(0, k, k, k);
}

double ground_truth_residual(const ProblemInstance& inst) {
  if (!inst.trueBasisStable || !inst.trueM) return 0.0;
  const ComplexMatrix& z = *inst.trueBasisStable;
  const double r = fro_norm(inst.pencil.A * z - inst.pencil.B * z * *inst.trueM);
  return r / (fro_norm(inst.pencil.A) * fro_norm(z));
}

}  // namespace qda
