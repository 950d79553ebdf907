#include "qda/qguard.hpp"

#include <algorithm>
#include <cmath>

#include "qda/errors.hpp"

namespace qda {

double default_tau(std::size_t m, std::size_t n) {
  return std::max(1e3, 10.0 * std::sqrt(static_cast<double>(n) * static_cast<double>(m) + 1.0));
}

std::optional<Violation> find_violation(const SfqPencil& p, double tau) {
  std::optional<Violation> best;
  auto scan = [&](const ComplexMatrix& a, bool inX) {
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t k = 0; k < a.cols(); ++k) {
        const double v = std::abs(a(i, k));
        if (v > tau && (!best || v > best->magnitude)) best = Violation{inX, i, k, v};
      }
  };
  scan(p.X, true);
  scan(p.Y, false);
  return best;
}

namespace {

double max_xy(const SfqPencil& p) { return std::max(p.X.max_abs(), p.Y.max_abs()); }

void check_pivot(const ComplexMatrix& a, std::size_t j, std::size_t l, const char* what) {
  if (j >= a.rows() || l >= a.cols()) throw ContractViolation(std::string(what) + ": index out of range");
  double row = 1.0;
  for (const auto& v : a.row(j)) row += std::abs(v);
  if (!(std::abs(a(j, l)) > kSingularityTol * row))
    throw ZeroPivot(std::string(what) + ": pivot entry is numerically zero");
}

}  // namespace

namespace {

// Gauss-Jordan exchange on the pivot (j, l) of a, written entrywise so the
// pivot row and column come out as quotients instead of differences of
// numbers of size |a(j, l)|. e shares the pivot column, f the pivot row;
// g takes the rank-one correction e(:, l) f(j, :) / a(j, l).
void exchange(ComplexMatrix& a, ComplexMatrix& e, ComplexMatrix& f, ComplexMatrix& g,
              std::size_t j, std::size_t l) {
  const ComplexMatrix a0 = a, e0 = e, f0 = f;
  const cplx x = a0(j, l);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (i == j && k == l) a(i, k) = 1.0 / x;
      else if (i == j) a(i, k) = -a0(j, k) / x;
      else if (k == l) a(i, k) = a0(i, l) / x;
      else a(i, k) -= a0(i, l) / x * a0(j, k);
    }
  for (std::size_t i = 0; i < e.rows(); ++i) {
    const cplx h = e0(i, l) / x;
    for (std::size_t k = 0; k < e.cols(); ++k) e(i, k) = k == l ? h : e0(i, k) - h * a0(j, k);
    for (std::size_t k = 0; k < g.cols(); ++k) g(i, k) -= h * f0(j, k);
  }
  for (std::size_t i = 0; i < f.rows(); ++i)
    for (std::size_t k = 0; k < f.cols(); ++k)
      f(i, k) = i == j ? -f0(j, k) / x : f0(i, k) - a0(i, l) / x * f0(j, k);
}

}  // namespace

SfqPencil action_x(const SfqPencil& p, std::size_t j, std::size_t l) {
  p.validate();
  check_pivot(p.X, j, l, "action_x");
  SfqPencil q = p;
  exchange(q.X, q.E, q.F, q.Y, j, l);
  q.Q1 = compose(Permutation::transposition(p.m + p.n, l, p.m + j), p.Q1);
  return q;
}

SfqPencil action_y(const SfqPencil& p, std::size_t j, std::size_t l) {
  p.validate();
  check_pivot(p.Y, j, l, "action_y");
  SfqPencil q = p;
  exchange(q.Y, q.F, q.E, q.X, j, l);
  q.Q2 = compose(Permutation::transposition(p.m + p.n, j, p.m + l), p.Q2);
  return q;
}

std::pair<SfqPencil, GuardReport> guard(const SfqPencil& p, const GuardConfig& cfg) {
  GuardReport rep;
  SfqPencil cur = p;
  if (!cfg.enabled) return {cur, rep};
  const double tau = cfg.tau_for(p.m, p.n);
  if (!(tau > 1.0)) throw ContractViolation("guard: tau must exceed 1");
  const std::size_t budget = cfg.actions_for(p.m, p.n);

  for (std::size_t it = 0; it < budget; ++it) {
    const auto v = find_violation(cur, tau);
    if (!v) break;
    const double before = max_xy(cur);
    try {
      cur = v->inX ? action_x(cur, v->j, v->l) : action_y(cur, v->j, v->l);
    } catch (const ZeroPivot&) {
      break;  // cannot happen for |entry| > tau > 1, kept for safety
    }
    rep.actionsApplied.push_back(
        {v->inX ? GuardKind::ActionX : GuardKind::ActionY, v->j, v->l, before, max_xy(cur)});
  }
  if (find_violation(cur, tau) && cfg.escalateToReinit) {
    const double before = max_xy(cur);
    InitReport r = reinit(cur, cfg.reinitIdea);
    cur = std::move(r.pencil);
    rep.actionsApplied.push_back({GuardKind::Reinit, 0, 0, before, max_xy(cur)});
  }
  rep.compliant = !find_violation(cur, tau);
  return {cur, rep};
}

}  // namespace qda
