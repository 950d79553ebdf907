#include "qda/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <limits>
#include <sstream>

#include "qda/errors.hpp"
#include "qda/io.hpp"

namespace qda {

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::QDA: return "QDA";
    case Algorithm::SDASF1: return "SDASF1";
    case Algorithm::SDASF2: return "SDASF2";
  }
  return "?";
}

namespace {

double cpu_now() { return double(std::clock()) / CLOCKS_PER_SEC; }

std::string eta_label(double eta, std::uint64_t seed) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "eta=%.0e seed=%llu", eta, static_cast<unsigned long long>(seed));
  return buf;
}

}  // namespace

AlgoRun run_halfplane(const ProblemInstance& inst, Algorithm alg, double gamma,
                      const QdaConfig& cfg, std::string caseLabel) {
  AlgoRun run;
  run.caseLabel = std::move(caseLabel);
  run.algorithm = alg;
  const GeneralPencil& h = inst.pencil;
  const double t0 = cpu_now();
  try {
    const GeneralPencil g = cayley(h, {gamma});
    if (alg == Algorithm::QDA) {
      run.result = run_qda(g, cfg);
    } else {
      QdaConfig c = cfg;
      c.residualSafeguard = false;
      run.result = alg == Algorithm::SDASF1 ? run_sdasf1(sf1_initial(g), c)
                                            : run_sdasf2(sf2_initial(g), c);
    }
    run.message = run.result.message;
  } catch (const std::exception& e) {
    run.cpuSeconds = cpu_now() - t0;
    run.message = e.what();
    return run;
  }
  run.cpuSeconds = cpu_now() - t0;
  const QdaResult& r = run.result;
  if (r.phi.empty()) return run;
  run.xFro = fro_norm(r.phi);
  const ComplexMatrix z = stable_basis(r.Q1, r.phi);
  try {
    run.nres1 = nres1(h, z, run.xFro);
  } catch (const RankDeficient&) {
  }
  try {
    run.nres2 = nres2(h, z);
  } catch (const RankDeficient&) {
  }
  run.ok = r.status == Status::Converged && run.nres2 >= 0.0;
  return run;
}

std::vector<AlgoRun> eta_sweep(const EtaSweepConfig& c) {
  std::vector<AlgoRun> runs;
  for (double eta : c.etas)
    for (std::uint64_t seed : c.seeds) {
      const ProblemInstance inst = gen_random_split(c.m, c.n, c.alpha, eta, seed);
      const std::string label = eta_label(eta, seed);
      runs.push_back(run_halfplane(inst, Algorithm::QDA, c.gamma, c.cfg, label));
      if (c.baseline) runs.push_back(run_halfplane(inst, *c.baseline, c.gamma, c.cfg, label));
    }
  return runs;
}

std::vector<AlgoRun> bse_like(const BseConfig& c) {
  std::vector<AlgoRun> runs;
  for (std::uint64_t seed : c.seeds) {
    const ProblemInstance inst = gen_bse_like(c.n, c.gapScale, seed, c.couplingScale);
    const std::string label = "seed=" + std::to_string(seed);
    runs.push_back(run_halfplane(inst, Algorithm::QDA, c.gamma, c.cfg, label));
    if (c.baseline) runs.push_back(run_halfplane(inst, *c.baseline, c.gamma, c.cfg, label));
  }
  return runs;
}

std::string table_csv(const std::vector<AlgoRun>& runs) {
  std::ostringstream os;
  os << "metric";
  for (const auto& r : runs) os << ",\"" << r.caseLabel << ' ' << to_string(r.algorithm) << '"';
  os << '\n';
  auto row = [&](const char* label, auto value) {
    os << label;
    for (const auto& r : runs) os << ',' << (r.ok ? value(r) : std::string("--"));
    os << '\n';
  };
  auto sci = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return std::string(buf);
  };
  row("\xE2\x80\x96X\xE2\x80\x96_F", [&](const AlgoRun& r) { return sci(r.xFro); });
  row("CPU", [&](const AlgoRun& r) { return sci(r.cpuSeconds); });
  row("NRes1", [&](const AlgoRun& r) { return sci(r.nres1); });
  row("NRes2", [&](const AlgoRun& r) { return sci(r.nres2); });
  row("#it'n", [&](const AlgoRun& r) { return std::to_string(r.result.iterations()); });
  return os.str();
}

ComplexMatrix phi_in_coordinates(const ComplexMatrix& Z, const Permutation& Q1, std::size_t m) {
  const ComplexMatrix qz = apply_perm_rows(Q1, Z);
  return solve_right(qz.block(0, 0, m, m), qz.block(m, 0, qz.rows() - m, m));
}

ConvergenceTrace trace_against_truth(const ProblemInstance& inst, const QdaConfig& cfg) {
  if (!inst.trueBasisStable) throw ContractViolation("instance has no stable ground truth");
  ConvergenceTrace t;
  const ComplexMatrix& z = *inst.trueBasisStable;
  auto obs = [&](const SfqPencil& p, const IterationRecord& rec) {
    TraceRow row;
    row.i = rec.index;
    row.err = fro_norm(p.X - phi_in_coordinates(z, p.Q1, p.m));
    row.normE = two_norm_est(p.E);
    row.normF = two_norm_est(p.F);
    row.normX = fro_norm(p.X);
    row.absUpdateX = rec.absUpdateX;
    row.wCondition = rec.wCondition;
    row.wMinPivot = rec.wMinPivot;
    t.rows.push_back(row);
  };
  const QdaResult r = run_qda(inst.pencil, cfg, obs);
  t.status = r.status;
  t.message = r.message;
  mark_asymptotic_window(t);
  return t;
}

void mark_asymptotic_window(ConvergenceTrace& t) {
  const double u = std::numeric_limits<double>::epsilon();
  for (auto& r : t.rows) {
    const double xs = std::max(1.0, r.normX);
    r.clean = r.i >= 4 && r.absUpdateX < 1e-2 * xs &&
              u * std::max(1.0, r.wCondition) * xs <= 1e-2 * r.absUpdateX;
  }
}

WindowSummary summarize_window(const ConvergenceTrace& t) {
  WindowSummary best, cur;
  for (std::size_t k = 0; k + 1 < t.rows.size(); ++k) {
    const auto& a = t.rows[k];
    const auto& b = t.rows[k + 1];
    if (!(a.clean && b.clean) || a.err == 0.0) {
      cur = {};
      continue;
    }
    const double q = b.err / a.err;
    if (cur.longest == 0) cur.minRatio = cur.maxRatio = q;
    cur.minRatio = std::min(cur.minRatio, q);
    cur.maxRatio = std::max(cur.maxRatio, q);
    ++cur.longest;
    if (cur.longest > best.longest) best = cur;
  }
  return best;
}

std::string trace_csv(const ConvergenceTrace& t) {
  std::ostringstream os;
  os << "i,err,ratio,absUpdateX,normX,normE,normF,wCondition,wMinPivot,inWindow\n";
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    const auto& r = t.rows[k];
    const double ratio = k > 0 && t.rows[k - 1].err > 0.0 ? r.err / t.rows[k - 1].err : 0.0;
    os << r.i << ',' << io::fmt(r.err) << ',' << (k > 0 ? io::fmt(ratio) : std::string()) << ','
       << io::fmt(r.absUpdateX) << ',' << io::fmt(r.normX) << ',' << io::fmt(r.normE) << ','
       << io::fmt(r.normF) << ',' << io::fmt(r.wCondition) << ',' << io::fmt(r.wMinPivot) << ','
       << (r.clean ? 1 : 0) << '\n';
  }
  return os.str();
}

}  // namespace qda
