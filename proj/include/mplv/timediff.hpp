#pragma once

#include <span>
#include <string>

#include "mplv/abstraction.hpp"
#include "mplv/ltl.hpp"
#include "mplv/maxplus.hpp"

namespace mplv {

// [A ⊗ x - x]_i ∼ α, exactly.
bool evaluate_timediff(const Matrix& a, std::span<const Ticks> x, const TimeDiff& prop);

// Replaces each proposition by its predicate formula over ts.predicates():
// the disjunction of its predicates for > and >=, the conjunction for < and
// <=. The propositions must have been fed to build_abstraction. Meant for
// formulas already passed through direct_check, so the diagonal entry no
// longer matters.
ltl::Formula translate(const ltl::Formula& f, const AbstractTransitionSystem& ts);

enum class Tri { False, True, Unknown };

struct DirectResult {
  Tri verdict = Tri::Unknown;
  ltl::Formula residual;  // formula after constant substitution and simplification
  std::string reason;     // "direct: tautology", "direct: contradiction", "direct: eigenvalue"
  std::size_t substituted = 0;
};

// Decides propositions fixed by a finite diagonal entry and the eventually-
// always shape against the eigenvalue, without any abstraction.
DirectResult direct_check(const Matrix& a, const ltl::Formula& f);

}  // namespace mplv
