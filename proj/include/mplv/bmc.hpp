#pragma once

// Bounded counterexample search on the abstraction, spuriousness checks,
// pivot splitting and the verification loop.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mplv/abstraction.hpp"
#include "mplv/ltl.hpp"
#include "mplv/timediff.hpp"

namespace mplv {

enum class PathKind { NoLoop, Lasso };

// A path of length k has k+1 state ids. For a lasso, 1 <= loop_start <= k
// and states[loop_start-1] == states[k]: the stem is states[0..l-1], the
// loop states[l..k], and the infinite run is stem followed by loop forever.
struct AbstractPath {
  PathKind kind = PathKind::NoLoop;
  std::vector<int> states;
  std::size_t loop_start = 0;

  std::size_t length() const { return states.empty() ? 0 : states.size() - 1; }
  std::vector<int> stem() const;
  std::vector<int> loop() const;
  // "s2 s0 s1" or "s1 (s0 s1)^w"
  std::string to_string(const AbstractTransitionSystem& ts) const;

  friend bool operator==(const AbstractPath&, const AbstractPath&) = default;
};

enum class PathStatus { Real, Spurious, Undecided };

struct SpuriousnessResult {
  PathStatus status = PathStatus::Real;
  std::vector<Dbm> witnesses;  // D_1, D_2, ... (all non-empty)
  std::size_t pivot = 0;       // index into the path's states; spurious only
};

// Path of length exactly k from an initial state witnessing !phi, where phi
// is a formula over predicate ids. Paths with pairwise distinct states are
// tried first under the bounded no-loop semantics; then lassos under the
// infinite semantics. Only lassos whose loop is not a repetition and whose
// stem cannot be rolled into the loop are considered.
//
// For an irreducible matrix every trajectory's state sequence is periodic
// with period c from step k0 on, so a real lasso has a loop length dividing
// c and a stem of at most k0 states before the loop; `shape` restricts the
// lasso candidates to those.
struct LassoShape {
  std::size_t max_stem = 0;  // k0
  std::size_t period = 1;    // c
};

std::optional<AbstractPath> find_counterexample(const AbstractTransitionSystem& ts, const ltl::Formula& phi,
                                                std::size_t k, std::optional<LassoShape> shape = std::nullopt);

SpuriousnessResult is_spurious_noloop(const AbstractTransitionSystem& ts, std::span<const int> states, const Dbm& x);
SpuriousnessResult is_spurious_lasso(const AbstractTransitionSystem& ts, const AbstractPath& path, const Dbm& x,
                                     std::size_t max_iter = 1000);

// Position of the state carrying the last non-empty DBM of a chain of
// `d_len` DBMs along stem_states stem states followed by the loop repeated.
std::size_t pivot_of(std::size_t d_len, std::size_t stem_states, std::size_t loop_len);

// Splits the pivot by the preimages of its successors' regions. Returns the
// ids of the new states.
std::vector<int> refine(AbstractTransitionSystem& ts, int pivot_id);

// k0 + c for irreducible matrices; abstract_states + 1 otherwise.
std::size_t completeness_threshold(const Matrix& a, std::size_t abstract_states);

struct VerifyOptions {
  std::size_t max_iter = 1000;
  std::size_t max_refinements = 10000;
};

enum class Outcome { Holds, Violated, Undecided };
std::string to_string(Outcome o);

struct RefinementRecord {
  std::size_t k = 0;
  AbstractPath path;
  std::vector<Dbm> witnesses;
  int pivot = 0;
  std::string pivot_name;
  std::string path_text;  // rendered before the split
  std::vector<int> cells;
};

// Points x(0..H-1) replaying an abstract path; the word loops back to
// `stem` with period `period` (0 for no-loop paths).
struct ConcreteTrace {
  std::vector<Point> points;
  std::size_t stem = 0;
  std::size_t period = 0;
};

struct Verdict {
  Outcome outcome = Outcome::Holds;
  std::string reason;
  bool direct = false;
  std::optional<AbstractPath> counterexample;
  std::vector<Dbm> witnesses;
  std::optional<ConcreteTrace> trace;
  std::size_t bound = 0;      // last k explored
  std::size_t threshold = 0;  // completeness threshold used
  std::vector<RefinementRecord> refinements;
  std::optional<AbstractTransitionSystem> abstraction;
  ltl::Formula checked;  // predicate formula handed to the search
};

// x = nullopt means all of R^n.
Verdict verify(const Matrix& a, const std::optional<Dbm>& x, const ltl::Formula& phi, VerifyOptions options = {});

// Concrete trajectory realizing the path from X. Lassos are unrolled to
// stem + 2 * loop + extra steps; no-loop paths get `extra` simulated points
// past their last state, which the path itself says nothing about. nullopt
// when no point could be extracted.
std::optional<ConcreteTrace> concretize(const AbstractTransitionSystem& ts, const AbstractPath& path, const Dbm& x,
                                        std::size_t extra);

// Whether the trace violates phi with propositions evaluated on the concrete
// points. Lasso traces must also show periodic labels over the horizon.
bool trace_violates(const Matrix& a, const ConcreteTrace& trace, const ltl::Formula& phi);

// Longest non-spurious path of pairwise distinct states from an initial state.
std::size_t empirical_threshold(const AbstractTransitionSystem& ts, const Dbm& x);

}  // namespace mplv
