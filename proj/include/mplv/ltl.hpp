#pragma once

// LTL over time-difference propositions and, after translation, over
// predicate ids.
//
// The parser only produces True, TimeDiff, Not, And, Next and Until; F, G,
// |, -> and false are desugared. False, Pred, Or and Release appear after
// translation, simplification or NNF conversion.

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mplv/proposition.hpp"

namespace mplv::ltl {

enum class Kind { True, False, TimeDiff, Pred, Not, And, Or, Next, Until, Release };

struct Node;
using Formula = std::shared_ptr<const Node>;

struct Node {
  Kind kind = Kind::True;
  TimeDiff atom{};         // TimeDiff
  std::size_t pred = 0;    // Pred, 0-based
  Formula lhs, rhs;        // unary operators use lhs
};

Formula tt();
Formula ff();
Formula atom(const TimeDiff& a);
Formula pred(std::size_t id);
Formula neg(Formula f);
Formula conj(Formula a, Formula b);
Formula disj(Formula a, Formula b);
Formula next(Formula f);
Formula until(Formula a, Formula b);
Formula release(Formula a, Formula b);
// true U f
Formula eventually(Formula f);
// !(true U !f)
Formula always(Formula f);

Formula parse(std::string_view text, Scale scale = {});
std::string to_string(const Formula& f, Scale scale = {});

bool equal(const Formula& a, const Formula& b);
// Strict weak order on formulas, structural.
int compare(const Formula& a, const Formula& b);

// Removes double negations everywhere.
Formula normalize(const Formula& f);
// Negation normal form: Not only in front of TimeDiff/Pred.
Formula nnf(const Formula& f);
bool is_nnf(const Formula& f);

// Constant propagation, flattening-free: And/Or with constants, duplicate
// operands, X/U/R over constants, double negation.
Formula simplify(const Formula& f);

// Distinct propositions in order of first occurrence (left to right).
std::vector<TimeDiff> atoms(const Formula& f);
// Throws Error when some proposition references a component >= n.
void check_indices(const Formula& f, std::size_t n);

// Replaces each TimeDiff node by fn(atom).
Formula substitute(const Formula& f, const std::function<Formula(const TimeDiff&)>& fn);

// The proposition a when f is exactly true U !(true U !a).
std::optional<TimeDiff> match_eventually_always(const Formula& f);

// Truth of a leaf (TimeDiff or Pred node) at a word position.
using AtomEval = std::function<bool(std::size_t position, const Node& leaf)>;

// Truth of f at position 0 of a word with `length` positions.
// With `loop` the word is infinite: after position length-1 comes `loop`,
// and the semantics are exact. Without it the bounded no-loop semantics is
// used: X at the last position is false, U needs its witness inside the
// word, R needs its release inside the word. That variant requires NNF.
bool evaluate(const Formula& f, std::size_t length, std::optional<std::size_t> loop, const AtomEval& leaf);

// One-step progression through a state: the obligation on the remaining
// suffix. `f` must be in NNF. The result is simplified.
Formula progress(const Formula& f, const std::function<bool(const Node& leaf)>& leaf);

}  // namespace mplv::ltl
