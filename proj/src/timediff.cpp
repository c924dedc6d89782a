#include "mplv/timediff.hpp"

namespace mplv {

bool compare(Ticks lhs, Cmp op, Ticks rhs) {
  switch (op) {
    case Cmp::Lt: return lhs < rhs;
    case Cmp::Le: return lhs <= rhs;
    case Cmp::Gt: return lhs > rhs;
    case Cmp::Ge: return lhs >= rhs;
  }
  return false;
}

std::string to_string(Cmp op) {
  switch (op) {
    case Cmp::Lt: return "<";
    case Cmp::Le: return "<=";
    case Cmp::Gt: return ">";
    case Cmp::Ge: return ">=";
  }
  return "?";
}

std::string TimeDiff::to_string(Scale scale) const {
  return "t" + std::to_string(index + 1) + " " + mplv::to_string(op) + " " + format_fixed(alpha, scale);
}

bool evaluate_timediff(const Matrix& a, std::span<const Ticks> x, const TimeDiff& prop) {
  if (prop.index >= a.dim()) throw Error("proposition index out of range");
  const Point y = mat_vec(a, x);
  return compare(checked_sub(y[prop.index], x[prop.index]), prop.op, prop.alpha);
}

ltl::Formula translate(const ltl::Formula& f, const AbstractTransitionSystem& ts) {
  const auto& all = ts.predicates();
  return ltl::substitute(f, [&](const TimeDiff& prop) {
    const bool lower = is_lower_bound(prop.op);
    ltl::Formula out;
    for (const auto& p : predicates_from_timediff(ts.matrix(), prop)) {
      auto id = find_predicate(all, p);
      if (!id) throw Error("abstraction lacks the predicates of " + prop.to_string());
      ltl::Formula leaf = ltl::pred(*id);
      out = !out ? leaf : lower ? ltl::disj(out, leaf) : ltl::conj(out, leaf);
    }
    if (!out) return lower ? ltl::ff() : ltl::tt();
    return out;
  });
}

DirectResult direct_check(const Matrix& a, const ltl::Formula& f) {
  ltl::check_indices(f, a.dim());
  DirectResult r;
  bool taut = false, contra = false;
  ltl::Formula sub = ltl::substitute(f, [&](const TimeDiff& prop) -> ltl::Formula {
    const MaxPlus diag = a(prop.index, prop.index);
    if (diag.is_epsilon()) return ltl::atom(prop);
    const bool holds = compare(diag.value(), prop.op, prop.alpha);
    const auto fin = a.finite_columns(prop.index);
    if (fin.size() == 1) {
      // t_i is the diagonal entry itself
      (holds ? taut : contra) = true;
      ++r.substituted;
      return holds ? ltl::tt() : ltl::ff();
    }
    if (is_lower_bound(prop.op) && holds) {
      taut = true;
      ++r.substituted;
      return ltl::tt();
    }
    if (!is_lower_bound(prop.op) && !holds) {
      contra = true;
      ++r.substituted;
      return ltl::ff();
    }
    return ltl::atom(prop);
  });
  r.residual = r.substituted ? ltl::simplify(sub) : f;
  const auto kind = r.residual->kind;
  if (kind == ltl::Kind::True || kind == ltl::Kind::False) {
    r.verdict = kind == ltl::Kind::True ? Tri::True : Tri::False;
    r.reason = taut && contra ? "direct: tautology, contradiction" : taut ? "direct: tautology" : "direct: contradiction";
    return r;
  }
  if (auto prop = ltl::match_eventually_always(r.residual); prop && is_irreducible(a)) {
    const Rational lambda = eigenvalue(a);
    const Rational alpha(prop->alpha, 1);
    const bool fails = is_lower_bound(prop->op) ? lambda < alpha : lambda > alpha;
    if (fails) {
      r.verdict = Tri::False;
      r.reason = "direct: eigenvalue";
    }
  }
  return r;
}

}  // namespace mplv
