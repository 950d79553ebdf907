#include "qda/init.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "qda/errors.hpp"

namespace qda {

std::string to_string(InitIdea idea) {
  switch (idea) {
    case InitIdea::ClosedForm: return "closed-form";
    case InitIdea::Idea1: return "idea1";
    case InitIdea::Idea2: return "idea2";
    case InitIdea::Idea3: return "idea3";
  }
  return "?";
}

std::string to_string(InitVariant v) { return v == InitVariant::AFirst ? "afirst" : "bfirst"; }

SfqPencil closed_form_init(const GeneralPencil& g, const Permutation& Q1, const Permutation& Q2) {
  g.validate();
  const std::size_t m = g.m, n = g.n;
  if (Q1.size() != m + n || Q2.size() != m + n)
    throw ContractViolation("closed_form_init: permutation size != m+n");
  const ComplexMatrix a = apply_perm_cols(Q1, g.A, true);
  const ComplexMatrix b = apply_perm_cols(Q2, g.B, true);
  // K = [B11 -A12; B21 -A22], R = [-A11 B12; -A21 B22], [E Y; X F] = -K^{-1} R.
  ComplexMatrix k = b, r = b;
  k.set_block(0, m, -a.block(0, m, m, n));
  k.set_block(m, m, -a.block(m, m, n, n));
  r.set_block(0, 0, -a.block(0, 0, m, m));
  r.set_block(m, 0, -a.block(m, 0, n, m));
  const ComplexMatrix s = -lu_solve(k, r);
  return SfqPencil{m, n, s.block(0, 0, m, m), s.block(m, m, n, n), s.block(m, 0, n, m),
                   s.block(0, m, m, n), Q1, Q2};
}

namespace {

enum class Tag { Free, A, B };

// Joint elimination state for the pivoted reductions.
class Reducer {
 public:
  Reducer(const GeneralPencil& g, InitIdea idea)
      : m_(g.m), n_(g.n), N_(g.m + g.n), a_(g.A), b_(g.B), idea_(idea), tag_(N_, Tag::Free),
        usedA_(N_, false), usedB_(N_, false) {
    maxA0_ = a_.max_abs();
    maxB0_ = b_.max_abs();
    tolA_ = kSingularityTol * maxA0_;
    tolB_ = kSingularityTol * maxB0_;
  }

  // Reverse elimination step on A: pivot goes to the trailing identity block.
  void step_a() {
    const bool band = idea_ == InitIdea::Idea1;
    std::size_t pr = N_, pc = N_;
    double best = -1.0;
    for (std::size_t r = N_; r-- > 0;) {
      if (tag_[r] != Tag::Free || (band && r < m_)) continue;
      for (std::size_t c = N_; c-- > 0;) {
        if (usedA_[c]) continue;
        const double v = std::abs(a_(r, c));
        if (v > best) best = v, pr = r, pc = c;
      }
    }
    if (pr == N_ || !(best > tolA_))
      throw Breakdown(to_string(idea_) + " A-step " + std::to_string(rowsA_.size()), best);
    eliminate(pr, pc, a_, Tag::A);
    usedA_[pc] = true;
    rowsA_.push_back(pr);
    colsA_.push_back(pc);
  }

  // Forward elimination step on B: pivot goes to the leading identity block.
  void step_b() {
    const bool band = idea_ == InitIdea::Idea1;
    std::size_t pr = N_, pc = N_;
    double best = -1.0;
    for (std::size_t r = 0; r < N_; ++r) {
      if (tag_[r] != Tag::Free || (band && r >= m_)) continue;
      for (std::size_t c = 0; c < N_; ++c) {
        if (usedB_[c]) continue;
        const double v = std::abs(b_(r, c));
        if (v > best) best = v, pr = r, pc = c;
      }
    }
    if (pr == N_ || !(best > tolB_))
      throw Breakdown(to_string(idea_) + " B-step " + std::to_string(rowsB_.size()), best);
    eliminate(pr, pc, b_, Tag::B);
    usedB_[pc] = true;
    rowsB_.push_back(pr);
    colsB_.push_back(pc);
  }

  bool a_done() const { return rowsA_.size() == n_; }
  bool b_done() const { return rowsB_.size() == m_; }

  InitReport finish(InitVariant variant) const {
    std::vector<std::size_t> img1(N_), img2(N_), rows(N_);
    for (std::size_t k = 0; k < n_; ++k) img1[N_ - 1 - k] = colsA_[k];
    for (std::size_t c = 0, pos = 0; c < N_; ++c)
      if (!usedA_[c]) img1[pos++] = c;
    for (std::size_t k = 0; k < m_; ++k) img2[k] = colsB_[k];
    for (std::size_t c = 0, pos = m_; c < N_; ++c)
      if (!usedB_[c]) img2[pos++] = c;
    for (std::size_t k = 0; k < m_; ++k) rows[k] = rowsB_[k];
    for (std::size_t k = 0; k < n_; ++k) rows[N_ - 1 - k] = rowsA_[k];
    const Permutation q1(std::move(img1)), q2(std::move(img2)), pr(std::move(rows));

    const ComplexMatrix ap = apply_perm_rows(pr, apply_perm_cols(q1, a_, true));
    const ComplexMatrix bp = apply_perm_rows(pr, apply_perm_cols(q2, b_, true));
    ComplexMatrix e0, f0, x0, y0;
    try {
      const LuFactorization u(bp.block(0, 0, m_, m_));
      const LuFactorization l(ap.block(m_, m_, n_, n_));
      e0 = u.solve(ap.block(0, 0, m_, m_));
      y0 = -u.solve(bp.block(0, m_, m_, n_));
      x0 = -l.solve(ap.block(m_, 0, n_, m_));
      f0 = l.solve(bp.block(m_, m_, n_, n_));
    } catch (const SingularMatrix& e) {
      throw Breakdown(to_string(idea_) + " normalization", e.pivot_magnitude());
    }
    InitReport rep;
    rep.pencil = SfqPencil{m_, n_, std::move(e0), std::move(f0), std::move(x0), std::move(y0),
                           q1, q2};
    rep.idea = idea_;
    rep.variant = variant;
    rep.maxAbsX = rep.pencil.X.max_abs();
    rep.maxAbsY = rep.pencil.Y.max_abs();
    rep.pivotGrowth = growth_;
    if (!rep.pencil.E.all_finite() || !rep.pencil.F.all_finite() || !rep.pencil.X.all_finite() ||
        !rep.pencil.Y.all_finite())
      throw Breakdown(to_string(idea_) + " normalization");
    return rep;
  }

 private:
  // Zeroes column c of `piv` in every row not already owned by `owner`.
  void eliminate(std::size_t r, std::size_t c, const ComplexMatrix& piv, Tag owner) {
    const cplx p = piv(r, c);
    const bool onA = &piv == &a_;
    for (std::size_t i = 0; i < N_; ++i) {
      if (i == r || tag_[i] == owner) continue;
      const cplx f = piv(i, c) / p;
      if (f == cplx{}) continue;
      auto ai = a_.row(i), ar = a_.row(r), bi = b_.row(i), br = b_.row(r);
      for (std::size_t j = 0; j < N_; ++j) {
        ai[j] -= f * ar[j];
        bi[j] -= f * br[j];
      }
      (onA ? a_ : b_)(i, c) = 0.0;
    }
    tag_[r] = owner;
    const double ga = maxA0_ > 0 ? a_.max_abs() / maxA0_ : 1.0;
    const double gb = maxB0_ > 0 ? b_.max_abs() / maxB0_ : 1.0;
    growth_ = std::max({growth_, ga, gb});
  }

  std::size_t m_, n_, N_;
  ComplexMatrix a_, b_;
  InitIdea idea_;
  std::vector<Tag> tag_;
  std::vector<bool> usedA_, usedB_;
  std::vector<std::size_t> rowsA_, colsA_, rowsB_, colsB_;
  double maxA0_ = 0, maxB0_ = 0, tolA_ = 0, tolB_ = 0, growth_ = 1.0;
};

void check_input(const GeneralPencil& g) {
  g.validate();
  if (g.m == 0 || g.n == 0) throw ContractViolation("reduction needs m >= 1 and n >= 1");
}

// Ideas 1 and 2: finish one matrix before touching the other.
InitReport reduce_sequential(const GeneralPencil& g, InitIdea idea, InitVariant variant) {
  check_input(g);
  Reducer r(g, idea);
  if (variant == InitVariant::AFirst) {
    while (!r.a_done()) r.step_a();
    while (!r.b_done()) r.step_b();
  } else {
    while (!r.b_done()) r.step_b();
    while (!r.a_done()) r.step_a();
  }
  return r.finish(variant);
}

}  // namespace

InitReport reduce_idea1(const GeneralPencil& g, InitVariant variant) {
  return reduce_sequential(g, InitIdea::Idea1, variant);
}

InitReport reduce_idea2(const GeneralPencil& g, InitVariant variant) {
  return reduce_sequential(g, InitIdea::Idea2, variant);
}

InitReport reduce_idea3(const GeneralPencil& g, InitVariant variant) {
  check_input(g);
  Reducer r(g, InitIdea::Idea3);
  const bool aFirst = variant == InitVariant::AFirst;
  while (!r.a_done() || !r.b_done()) {
    if (aFirst) {
      if (!r.a_done()) r.step_a();
      if (!r.b_done()) r.step_b();
    } else {
      if (!r.b_done()) r.step_b();
      if (!r.a_done()) r.step_a();
    }
  }
  return r.finish(variant);
}

InitReport reduce(const GeneralPencil& g, InitIdea idea, InitVariant variant) {
  switch (idea) {
    case InitIdea::Idea1: return reduce_idea1(g, variant);
    case InitIdea::Idea2: return reduce_idea2(g, variant);
    case InitIdea::Idea3: return reduce_idea3(g, variant);
    case InitIdea::ClosedForm: {
      InitReport rep;
      rep.pencil = closed_form_init(g, Permutation::identity(g.m + g.n),
                                    Permutation::identity(g.m + g.n));
      rep.idea = idea;
      rep.variant = variant;
      rep.maxAbsX = rep.pencil.X.max_abs();
      rep.maxAbsY = rep.pencil.Y.max_abs();
      return rep;
    }
  }
  throw ContractViolation("unknown init idea");
}

InitReport reduce_with_fallback(const GeneralPencil& g, InitIdea idea, InitVariant variant) {
  std::vector<InitIdea> order{idea};
  for (InitIdea i : {InitIdea::Idea3, InitIdea::Idea2, InitIdea::Idea1})
    if (i != idea) order.push_back(i);
  const InitVariant other =
      variant == InitVariant::AFirst ? InitVariant::BFirst : InitVariant::AFirst;
  std::optional<Breakdown> last;
  for (InitVariant v : {variant, other}) {
    for (InitIdea i : order) {
      try {
        return reduce(g, i, v);
      } catch (const Breakdown& e) {
        last = e;
      } catch (const SingularMatrix& e) {
        last = Breakdown("closed-form", e.pivot_magnitude());
      }
    }
  }
  throw *last;
}

InitReport reinit(const SfqPencil& p, InitIdea idea, InitVariant variant) {
  p.validate();
  SfqPencil base = p;
  base.Q1 = Permutation::identity(p.m + p.n);
  base.Q2 = Permutation::identity(p.m + p.n);
  InitReport rep = reduce_with_fallback(assemble_general(base), idea, variant);
  rep.pencil.Q1 = compose(rep.pencil.Q1, p.Q1);
  rep.pencil.Q2 = compose(rep.pencil.Q2, p.Q2);
  return rep;
}

}  // namespace qda
