#include "mplv/ltl.hpp"

#include <algorithm>

namespace mplv::ltl {

namespace {

Formula make(Kind kind, Formula lhs = nullptr, Formula rhs = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

bool is_leaf(const Formula& f) { return f->kind == Kind::TimeDiff || f->kind == Kind::Pred; }
bool is_const(const Formula& f, bool value) { return f->kind == (value ? Kind::True : Kind::False); }

}  // namespace

Formula tt() {
  static const Formula t = make(Kind::True);
  return t;
}

Formula ff() {
  static const Formula f = make(Kind::False);
  return f;
}

Formula atom(const TimeDiff& a) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::TimeDiff;
  n->atom = a;
  return n;
}

Formula pred(std::size_t id) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Pred;
  n->pred = id;
  return n;
}

Formula neg(Formula f) { return make(Kind::Not, std::move(f)); }
Formula conj(Formula a, Formula b) { return make(Kind::And, std::move(a), std::move(b)); }
Formula disj(Formula a, Formula b) { return make(Kind::Or, std::move(a), std::move(b)); }
Formula next(Formula f) { return make(Kind::Next, std::move(f)); }
Formula until(Formula a, Formula b) { return make(Kind::Until, std::move(a), std::move(b)); }
Formula release(Formula a, Formula b) { return make(Kind::Release, std::move(a), std::move(b)); }
Formula eventually(Formula f) { return until(tt(), std::move(f)); }
Formula always(Formula f) { return neg(eventually(neg(std::move(f)))); }

int compare(const Formula& a, const Formula& b) {
  if (a == b) return 0;
  if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
  switch (a->kind) {
    case Kind::True:
    case Kind::False:
      return 0;
    case Kind::TimeDiff:
      if (a->atom == b->atom) return 0;
      return a->atom < b->atom ? -1 : 1;
    case Kind::Pred:
      if (a->pred == b->pred) return 0;
      return a->pred < b->pred ? -1 : 1;
    default:
      break;
  }
  if (int c = compare(a->lhs, b->lhs); c != 0) return c;
  if (a->rhs && b->rhs) return compare(a->rhs, b->rhs);
  return 0;
}

bool equal(const Formula& a, const Formula& b) { return compare(a, b) == 0; }

std::string to_string(const Formula& f, Scale scale) {
  switch (f->kind) {
    case Kind::True:
      return "true";
    case Kind::False:
      return "false";
    case Kind::TimeDiff:
      return "(" + f->atom.to_string(scale) + ")";
    case Kind::Pred:
      return "p" + std::to_string(f->pred + 1);
    case Kind::Not:
      // !(true U !a) prints as G a
      if (f->lhs->kind == Kind::Until && f->lhs->lhs->kind == Kind::True && f->lhs->rhs->kind == Kind::Not) {
        return "G " + to_string(f->lhs->rhs->lhs, scale);
      }
      return "!" + to_string(f->lhs, scale);
    case Kind::And:
      return "(" + to_string(f->lhs, scale) + " & " + to_string(f->rhs, scale) + ")";
    case Kind::Or:
      return "(" + to_string(f->lhs, scale) + " | " + to_string(f->rhs, scale) + ")";
    case Kind::Next:
      return "X " + to_string(f->lhs, scale);
    case Kind::Until:
      if (f->lhs->kind == Kind::True) return "F " + to_string(f->rhs, scale);
      return "(" + to_string(f->lhs, scale) + " U " + to_string(f->rhs, scale) + ")";
    case Kind::Release:
      return "(" + to_string(f->lhs, scale) + " R " + to_string(f->rhs, scale) + ")";
  }
  return "?";
}

Formula normalize(const Formula& f) {
  switch (f->kind) {
    case Kind::True:
    case Kind::False:
    case Kind::TimeDiff:
    case Kind::Pred:
      return f;
    case Kind::Not: {
      if (f->lhs->kind == Kind::Not) return normalize(f->lhs->lhs);
      return neg(normalize(f->lhs));
    }
    case Kind::Next:
      return next(normalize(f->lhs));
    default:
      return make(f->kind, normalize(f->lhs), normalize(f->rhs));
  }
}

namespace {

Formula nnf_of(const Formula& f, bool negated) {
  switch (f->kind) {
    case Kind::True:
      return negated ? ff() : tt();
    case Kind::False:
      return negated ? tt() : ff();
    case Kind::TimeDiff:
    case Kind::Pred:
      return negated ? neg(f) : f;
    case Kind::Not:
      return nnf_of(f->lhs, !negated);
    case Kind::And:
      return negated ? disj(nnf_of(f->lhs, true), nnf_of(f->rhs, true))
                     : conj(nnf_of(f->lhs, false), nnf_of(f->rhs, false));
    case Kind::Or:
      return negated ? conj(nnf_of(f->lhs, true), nnf_of(f->rhs, true))
                     : disj(nnf_of(f->lhs, false), nnf_of(f->rhs, false));
    case Kind::Next:
      return next(nnf_of(f->lhs, negated));
    case Kind::Until:
      return negated ? release(nnf_of(f->lhs, true), nnf_of(f->rhs, true))
                     : until(nnf_of(f->lhs, false), nnf_of(f->rhs, false));
    case Kind::Release:
      return negated ? until(nnf_of(f->lhs, true), nnf_of(f->rhs, true))
                     : release(nnf_of(f->lhs, false), nnf_of(f->rhs, false));
  }
  throw InternalError("unknown formula node");
}

}  // namespace

Formula nnf(const Formula& f) { return nnf_of(f, false); }

bool is_nnf(const Formula& f) {
  switch (f->kind) {
    case Kind::True:
    case Kind::False:
    case Kind::TimeDiff:
    case Kind::Pred:
      return true;
    case Kind::Not:
      return is_leaf(f->lhs);
    case Kind::Next:
      return is_nnf(f->lhs);
    default:
      return is_nnf(f->lhs) && is_nnf(f->rhs);
  }
}

Formula simplify(const Formula& f) {
  switch (f->kind) {
    case Kind::True:
    case Kind::False:
    case Kind::TimeDiff:
    case Kind::Pred:
      return f;
    case Kind::Not: {
      Formula a = simplify(f->lhs);
      if (is_const(a, true)) return ff();
      if (is_const(a, false)) return tt();
      if (a->kind == Kind::Not) return a->lhs;
      return a == f->lhs ? f : neg(a);
    }
    case Kind::And: {
      Formula a = simplify(f->lhs), b = simplify(f->rhs);
      if (is_const(a, false) || is_const(b, false)) return ff();
      if (is_const(a, true)) return b;
      if (is_const(b, true)) return a;
      if (equal(a, b)) return a;
      return conj(a, b);
    }
    case Kind::Or: {
      Formula a = simplify(f->lhs), b = simplify(f->rhs);
      if (is_const(a, true) || is_const(b, true)) return tt();
      if (is_const(a, false)) return b;
      if (is_const(b, false)) return a;
      if (equal(a, b)) return a;
      return disj(a, b);
    }
    case Kind::Next: {
      Formula a = simplify(f->lhs);
      if (a->kind == Kind::True || a->kind == Kind::False) return a;
      return next(a);
    }
    case Kind::Until: {
      Formula a = simplify(f->lhs), b = simplify(f->rhs);
      if (b->kind == Kind::True || b->kind == Kind::False) return b;
      if (is_const(a, false)) return b;
      return until(a, b);
    }
    case Kind::Release: {
      Formula a = simplify(f->lhs), b = simplify(f->rhs);
      if (b->kind == Kind::True || b->kind == Kind::False) return b;
      if (is_const(a, true)) return b;
      return release(a, b);
    }
  }
  throw InternalError("unknown formula node");
}

namespace {

void collect_atoms(const Formula& f, std::vector<TimeDiff>& out) {
  if (!f) return;
  if (f->kind == Kind::TimeDiff) {
    if (std::find(out.begin(), out.end(), f->atom) == out.end()) out.push_back(f->atom);
    return;
  }
  collect_atoms(f->lhs, out);
  collect_atoms(f->rhs, out);
}

}  // namespace

std::vector<TimeDiff> atoms(const Formula& f) {
  std::vector<TimeDiff> out;
  collect_atoms(f, out);
  return out;
}

void check_indices(const Formula& f, std::size_t n) {
  for (const auto& a : atoms(f)) {
    if (a.index >= n) {
      throw Error("proposition t" + std::to_string(a.index + 1) + " is out of range for a system of dimension " +
                  std::to_string(n));
    }
  }
}

Formula substitute(const Formula& f, const std::function<Formula(const TimeDiff&)>& fn) {
  switch (f->kind) {
    case Kind::True:
    case Kind::False:
    case Kind::Pred:
      return f;
    case Kind::TimeDiff:
      return fn(f->atom);
    case Kind::Not:
      return neg(substitute(f->lhs, fn));
    case Kind::Next:
      return next(substitute(f->lhs, fn));
    default:
      return make(f->kind, substitute(f->lhs, fn), substitute(f->rhs, fn));
  }
}

std::optional<TimeDiff> match_eventually_always(const Formula& f) {
  // true U !(true U !a)
  if (f->kind != Kind::Until || f->lhs->kind != Kind::True) return std::nullopt;
  const Formula& g = f->rhs;
  if (g->kind != Kind::Not || g->lhs->kind != Kind::Until || g->lhs->lhs->kind != Kind::True) return std::nullopt;
  const Formula& inner = g->lhs->rhs;
  if (inner->kind != Kind::Not || inner->lhs->kind != Kind::TimeDiff) return std::nullopt;
  return inner->lhs->atom;
}

namespace {

using Bits = std::vector<char>;

struct WordEval {
  std::size_t length;
  std::optional<std::size_t> loop;
  const AtomEval& leaf;

  Bits run(const Formula& f) const {
    const std::size_t len = length;
    Bits v(len, 0);
    switch (f->kind) {
      case Kind::True:
        std::fill(v.begin(), v.end(), 1);
        return v;
      case Kind::False:
        return v;
      case Kind::TimeDiff:
      case Kind::Pred:
        for (std::size_t i = 0; i < len; ++i) v[i] = leaf(i, *f);
        return v;
      case Kind::Not: {
        if (!loop && !is_leaf(f->lhs)) throw Error("bounded no-loop semantics needs a formula in NNF");
        Bits a = run(f->lhs);
        for (std::size_t i = 0; i < len; ++i) v[i] = !a[i];
        return v;
      }
      case Kind::And:
      case Kind::Or: {
        Bits a = run(f->lhs), b = run(f->rhs);
        for (std::size_t i = 0; i < len; ++i) v[i] = f->kind == Kind::And ? (a[i] && b[i]) : (a[i] || b[i]);
        return v;
      }
      case Kind::Next: {
        Bits a = run(f->lhs);
        for (std::size_t i = 0; i < len; ++i) {
          if (i + 1 < len) v[i] = a[i + 1];
          else v[i] = loop ? a[*loop] : 0;
        }
        return v;
      }
      case Kind::Until:
      case Kind::Release:
        return fixpoint(f->kind == Kind::Until, run(f->lhs), run(f->rhs));
    }
    throw InternalError("unknown formula node");
  }

  // U: least fixpoint of v = g | (f & Xv); R: greatest fixpoint of v = g & (f | Xv).
  Bits fixpoint(bool is_until, const Bits& f, const Bits& g) const {
    const std::size_t len = length;
    Bits v(len, is_until ? 0 : 1);
    if (!loop) {
      for (std::size_t i = len; i-- > 0;) {
        const bool after = i + 1 < len ? v[i + 1] : false;
        v[i] = is_until ? (g[i] || (f[i] && after)) : (g[i] && (f[i] || after));
      }
      return v;
    }
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t i = len; i-- > 0;) {
        const bool after = v[i + 1 < len ? i + 1 : *loop];
        const char nv = is_until ? (g[i] || (f[i] && after)) : (g[i] && (f[i] || after));
        if (nv != v[i]) {
          v[i] = nv;
          changed = true;
        }
      }
    }
    return v;
  }
};

}  // namespace

bool evaluate(const Formula& f, std::size_t length, std::optional<std::size_t> loop, const AtomEval& leaf) {
  if (length == 0) throw Error("cannot evaluate a formula on an empty word");
  if (loop && *loop >= length) throw Error("loop index outside the word");
  return WordEval{length, loop, leaf}.run(f)[0];
}

Formula progress(const Formula& f, const std::function<bool(const Node& leaf)>& leaf) {
  switch (f->kind) {
    case Kind::True:
    case Kind::False:
      return f;
    case Kind::TimeDiff:
    case Kind::Pred:
      return leaf(*f) ? tt() : ff();
    case Kind::Not:
      if (!is_leaf(f->lhs)) throw Error("progression needs a formula in NNF");
      return leaf(*f->lhs) ? ff() : tt();
    case Kind::And:
      return simplify(conj(progress(f->lhs, leaf), progress(f->rhs, leaf)));
    case Kind::Or:
      return simplify(disj(progress(f->lhs, leaf), progress(f->rhs, leaf)));
    case Kind::Next:
      return f->lhs;
    case Kind::Until:
      return simplify(disj(progress(f->rhs, leaf), conj(progress(f->lhs, leaf), f)));
    case Kind::Release:
      return simplify(conj(progress(f->rhs, leaf), disj(progress(f->lhs, leaf), f)));
  }
  throw InternalError("unknown formula node");
}

}  // namespace mplv::ltl
