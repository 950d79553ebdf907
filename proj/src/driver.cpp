#include "qda/driver.hpp"

#include <cmath>

#include "qda/errors.hpp"

namespace qda {

std::string to_string(Status s) {
  switch (s) {
    case Status::Converged: return "Converged";
    case Status::MaxIter: return "MaxIter";
    case Status::Breakdown: return "Breakdown";
  }
  return "?";
}

std::string to_string(Kernel k) {
  switch (k) {
    case Kernel::W: return "W";
    case Kernel::Wtilde: return "Wtilde";
    case Kernel::SF1: return "SF1";
    case Kernel::SF2: return "SF2";
  }
  return "?";
}

void QdaConfig::validate() const {
  if (!(rtol > 0.0)) throw ContractViolation("rtol must be positive");
  if (maxIter < 1) throw ContractViolation("maxIter must be at least 1");
}

ComplexMatrix stable_basis(const Permutation& Q1, const ComplexMatrix& X) {
  return apply_perm_rows(Q1, vstack(ComplexMatrix::identity(X.cols()), X), true);
}

ComplexMatrix antistable_basis(const Permutation& Q2, const ComplexMatrix& Y) {
  return apply_perm_rows(Q2, vstack(Y, ComplexMatrix::identity(Y.cols())), true);
}

SfqPencil sf1_initial(const GeneralPencil& g) {
  const auto id = Permutation::identity(g.m + g.n);
  return closed_form_init(g, id, id);
}

SfqPencil sf2_initial(const GeneralPencil& g) {
  if (g.m != g.n) throw ContractViolation("SF2 needs m == n");
  return closed_form_init(g, Permutation::identity(g.m + g.n), block_swap(g.m, g.n));
}

namespace {

using StepFn = std::function<StepOutcome(const SfqPencil&, Kernel)>;

bool finite(const SfqPencil& p) {
  return p.E.all_finite() && p.F.all_finite() && p.X.all_finite() && p.Y.all_finite();
}

Kernel other(Kernel k) { return k == Kernel::W ? Kernel::Wtilde : Kernel::W; }

struct LoopOptions {
  bool guard = true;
  bool recover = true;
  std::optional<Kernel> fixedKernel;
};

QdaResult iterate(const SfqPencil& p0, const QdaConfig& cfg, const GeneralPencil& ref,
                  const StepFn& stepFn, const LoopOptions& opt, const IterationObserver& obs) {
  cfg.validate();
  p0.validate();
  QdaResult res;
  SfqPencil p = p0;
  double prevDiff = -1.0;
  bool reinitUsed = false, switchUsed = false, pendingRecovered = false;
  Kernel kernel = opt.fixedKernel ? *opt.fixedKernel
                                  : (cfg.kernel ? *cfg.kernel : preferred_kernel(p));
  GuardConfig gcfg = cfg.guard;
  gcfg.enabled = gcfg.enabled && opt.guard;

  auto finish = [&](Status st, std::string msg) {
    res.status = st;
    res.message = std::move(msg);
    res.phi = p.X;
    res.psi = p.Y;
    res.Q1 = p.Q1;
    res.Q2 = p.Q2;
    res.final = p;
    return res;
  };

  for (std::size_t i = 0; i < cfg.maxIter;) {
    StepOutcome out;
    try {
      out = stepFn(p, kernel);
      if (!finite(out.next))
        throw Breakdown("non-finite iterate " + std::to_string(i + 1));
    } catch (const Breakdown& e) {
      if (opt.recover && cfg.recoverFromBreakdown && !reinitUsed) {
        reinitUsed = true;
        try {
          p = reinit(p, cfg.guard.reinitIdea).pencil;
        } catch (const Breakdown&) {
        }
        prevDiff = -1.0;
        pendingRecovered = true;
        continue;
      }
      if (opt.recover && cfg.recoverFromBreakdown && !switchUsed) {
        switchUsed = true;
        kernel = other(kernel);
        pendingRecovered = true;
        continue;
      }
      return finish(Status::Breakdown,
                    std::string(e.what()) + " at iteration " + std::to_string(i + 1));
    }

    IterationRecord rec;
    rec.index = i + 1;
    rec.kernel = out.kernelUsed;
    rec.wCondition = out.wConditionEstimate;
    rec.wMinPivot = out.wMinPivot;
    rec.recovered = pendingRecovered;
    pendingRecovered = false;
    rec.absUpdateX = fro_norm(out.next.X - p.X);
    rec.normE = fro_norm(out.next.E);
    rec.normF = fro_norm(out.next.F);
    rec.normX = fro_norm(out.next.X);
    rec.normY = fro_norm(out.next.Y);
    rec.relUpdateX = rec.normX > 0.0 ? rec.absUpdateX / rec.normX : rec.absUpdateX;

    const StopDecision d = check_stop(rec.absUpdateX, prevDiff, rec.normX, cfg.rtol, cfg.stopMode);
    prevDiff = rec.absUpdateX;

    SfqPencil next = std::move(out.next);
    try {
      auto [guarded, report] = guard(next, gcfg);
      next = std::move(guarded);
      rec.guardEvents = std::move(report);
    } catch (const Breakdown& e) {
      p = std::move(next);
      res.history.push_back(rec);
      if (obs) obs(p, rec);
      return finish(Status::Breakdown,
                    std::string(e.what()) + " in guard at iteration " + std::to_string(i + 1));
    }
    const bool guardActed = !rec.guardEvents.actionsApplied.empty();
    if (guardActed) prevDiff = -1.0;

    p = std::move(next);
    res.history.push_back(rec);
    if (obs) obs(p, res.history.back());
    ++i;

    if (d.stop && !guardActed) {
      if (!cfg.residualSafeguard) return finish(Status::Converged, "stop rule satisfied");
      try {
        res.safeguardResidual = subspace_residual(ref, stable_basis(p.Q1, p.X));
      } catch (const RankDeficient&) {
        // Singular B restricted to the subspace: the fit is undefined, skip.
        return finish(Status::Converged, "stop rule satisfied; safeguard not applicable");
      }
      if (res.safeguardResidual <= std::sqrt(cfg.rtol))
        return finish(Status::Converged, "stop rule and residual safeguard satisfied");
    }
  }
  return finish(Status::MaxIter, "iteration limit reached");
}

}  // namespace

QdaResult run_sfq(const SfqPencil& p0, const QdaConfig& cfg, const GeneralPencil* reference,
                  const IterationObserver& obs) {
  const GeneralPencil ref = reference ? *reference : assemble_general(p0);
  return iterate(p0, cfg, ref, [](const SfqPencil& p, Kernel k) { return step(p, k); },
                 LoopOptions{}, obs);
}

QdaResult run_qda(const GeneralPencil& g, const QdaConfig& cfg, const IterationObserver& obs) {
  cfg.validate();
  QdaResult res;
  InitReport init;
  try {
    init = reduce_with_fallback(g, cfg.initIdea, cfg.initVariant);
  } catch (const Breakdown& e) {
    res.status = Status::Breakdown;
    res.message = std::string("initialization: ") + e.what();
    return res;
  }
  // The initial pencil may already violate tau; tidy it before iterating.
  SfqPencil p0 = init.pencil;
  if (cfg.guard.enabled) p0 = guard(p0, cfg.guard).first;
  res = run_sfq(p0, cfg, &g, obs);
  res.init = std::move(init);
  return res;
}

QdaResult run_sdasf1(const SfqPencil& p0, const QdaConfig& cfg, const IterationObserver& obs) {
  if (!p0.Q1.is_identity() || !p0.Q2.is_identity())
    throw ContractViolation("run_sdasf1 needs Q1 = Q2 = I");
  const GeneralPencil ref = assemble_general(p0);
  auto fn = [](const SfqPencil& p, Kernel) {
    EFXY s = step_sf1(p.E, p.F, p.X, p.Y);
    SfqPencil next{p.m, p.n, std::move(s.E), std::move(s.F), std::move(s.X), std::move(s.Y),
                   p.Q1, p.Q2};
    return StepOutcome{std::move(next), 0.0, 0.0, Kernel::SF1};
  };
  return iterate(p0, cfg, ref, fn, LoopOptions{false, false, Kernel::SF1}, obs);
}

QdaResult run_sdasf2(const SfqPencil& p0, const QdaConfig& cfg, const IterationObserver& obs) {
  if (p0.m != p0.n || !p0.Q1.is_identity() || !(p0.Q2 == block_swap(p0.m, p0.n)))
    throw ContractViolation("run_sdasf2 needs m == n, Q1 = I and Q2 = [0 I; I 0]");
  const GeneralPencil ref = assemble_general(p0);
  auto fn = [](const SfqPencil& p, Kernel) {
    EFXY s = step_sf2(p.E, p.F, p.X, p.Y);
    SfqPencil next{p.m, p.n, std::move(s.E), std::move(s.F), std::move(s.X), std::move(s.Y),
                   p.Q1, p.Q2};
    return StepOutcome{std::move(next), 0.0, 0.0, Kernel::SF2};
  };
  return iterate(p0, cfg, ref, fn, LoopOptions{false, false, Kernel::SF2}, obs);
}

}  // namespace qda
