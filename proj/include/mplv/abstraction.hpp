#pragma once

// Predicate abstraction of an MPL system x(k+1) = A ⊗ x(k).
//
// Predicates are difference inequalities read off the rows of A and off the
// time-difference propositions of a formula. Each satisfiable Boolean
// valuation of the predicates is an abstract state whose region is a DBM on
// which the max-plus dynamics is affine.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mplv/dbm.hpp"
#include "mplv/maxplus.hpp"
#include "mplv/proposition.hpp"

namespace mplv {

// (i, j, c, s): x_i - x_j >= c when non_strict (s = 1), x_i - x_j > c otherwise.
struct Predicate {
  std::size_t i = 0;
  std::size_t j = 0;
  Ticks c = 0;
  bool non_strict = true;

  // (j, i, -c, 1 - s)
  Predicate negated() const;
  Dbm region(std::size_t n) const;
  bool holds(std::span<const Ticks> x) const;
  // "(1,2,3,1)" with 1-based indices.
  std::string to_string(Scale scale = {}) const;

  friend bool operator==(const Predicate&, const Predicate&) = default;
};

struct MatrixPredicates {
  std::vector<Predicate> predicates;              // deduplicated union, row-major order
  std::vector<std::vector<std::size_t>> by_row;   // row k -> indices into `predicates`
};

MatrixPredicates predicates_from_matrix(const Matrix& a);
std::vector<Predicate> predicates_from_timediff(const Matrix& a, const TimeDiff& prop);

struct Cell {
  std::vector<bool> valuation;
  Dbm region;
};

// Branch-and-prune enumeration of the satisfiable valuations, in the order the
// splits produce them (negative branch first).
std::vector<Cell> generate_abstract_states(std::span<const Predicate> predicates, std::size_t n);

// Coefficient g of the affine dynamics active on a cell: for each row k the
// finite column whose term wins the max, ties going to the lower index.
// `by_row` are the per-row predicate indices from predicates_from_matrix
// (remapped into `predicates`).
AffineDynamics affine_dynamics_for_state(const Matrix& a, const std::vector<bool>& valuation,
                                         std::span<const Predicate> predicates,
                                         const std::vector<std::vector<std::size_t>>& by_row);

struct AbstractState {
  int id = 0;
  std::string name;
  std::vector<bool> valuation;
  Dbm region;
  AffineDynamics dynamics;
  std::vector<std::size_t> labels;  // predicate indices true on the state
  bool initial = false;

  bool has_label(std::size_t predicate) const;
};

class AbstractTransitionSystem {
 public:
  AbstractTransitionSystem(Matrix a, std::vector<Predicate> predicates, std::vector<std::vector<std::size_t>> by_row,
                           std::vector<AbstractState> states, Dbm initial_set);

  std::size_t dim() const { return a_.dim(); }
  const Matrix& matrix() const { return a_; }
  const std::vector<Predicate>& predicates() const { return predicates_; }
  const std::vector<std::vector<std::size_t>>& predicates_by_row() const { return by_row_; }
  const Dbm& initial_set() const { return initial_; }

  // Live states sorted by ascending id.
  const std::vector<AbstractState>& states() const { return states_; }
  std::size_t size() const { return states_.size(); }
  std::size_t position_of(int id) const;
  const AbstractState& state(int id) const { return states_[position_of(id)]; }

  // Successor positions of the state at `pos`, ascending.
  const std::vector<std::size_t>& successors(std::size_t pos) const { return succ_[pos]; }
  bool has_edge(int from, int to) const;
  std::vector<std::pair<int, int>> edges() const;
  std::vector<int> initial_ids() const;

  // Id of the unique state whose region contains x; throws InternalError when
  // the partition invariant is broken.
  int abstract(std::span<const Ticks> x) const;

  // Replaces a state by cells partitioning its region. The cells inherit the
  // valuation, labels and dynamics of the replaced state, get fresh ids in
  // the given order and named <name>a, <name>b, ... Edges touching the cells
  // are recomputed by one-step reachability. Returns the new ids.
  std::vector<int> replace_state(int id, const std::vector<Dbm>& cells);

 private:
  bool reaches(const AbstractState& from, const AbstractState& to) const;
  void rebuild_index();

  Matrix a_;
  std::vector<Predicate> predicates_;
  std::vector<std::vector<std::size_t>> by_row_;
  std::vector<AbstractState> states_;
  std::vector<std::vector<std::size_t>> succ_;
  std::vector<std::size_t> id_to_pos_;
  Dbm initial_;
  int next_id_ = 0;
};

// Full pipeline: matrix predicates, then the predicates of each proposition
// (duplicates merged, first copy kept), states, dynamics, initial states and
// transitions. `initial_set` = nullopt means all of R^n.
AbstractTransitionSystem build_abstraction(const Matrix& a, std::span<const TimeDiff> propositions,
                                           const std::optional<Dbm>& initial_set = std::nullopt);

// Ids of the states whose region meets X.
std::vector<int> initial_states(const AbstractTransitionSystem& ts, const Dbm& x);

// Index of `p` in `list`, if present.
std::optional<std::size_t> find_predicate(std::span<const Predicate> list, const Predicate& p);

}  // namespace mplv
