#include "mplv/abstraction.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace mplv {

namespace {
constexpr std::size_t kNoPos = std::numeric_limits<std::size_t>::max();
}

Predicate Predicate::negated() const { return Predicate{j, i, -c, !non_strict}; }

Dbm Predicate::region(std::size_t n) const {
  if (i >= n || j >= n || i == j) throw Error("predicate indices out of range");
  Dbm d = Dbm::universe(n);
  // x_i - x_j >= c  <=>  x_j - x_i <= -c
  d.constrain(j, i, non_strict ? Bound::le(-c) : Bound::lt(-c));
  return *canonicalize(std::move(d));
}

bool Predicate::holds(std::span<const Ticks> x) const {
  const __int128 diff = static_cast<__int128>(x[i]) - x[j];
  return non_strict ? diff >= c : diff > c;
}

std::string Predicate::to_string(Scale scale) const {
  return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "," + format_fixed(c, scale) + "," +
         (non_strict ? "1" : "0") + ")";
}

std::optional<std::size_t> find_predicate(std::span<const Predicate> list, const Predicate& p) {
  for (std::size_t k = 0; k < list.size(); ++k) {
    if (list[k] == p) return k;
  }
  return std::nullopt;
}

MatrixPredicates predicates_from_matrix(const Matrix& a) {
  MatrixPredicates out;
  out.by_row.resize(a.dim());
  for (std::size_t k = 0; k < a.dim(); ++k) {
    const auto fin = a.finite_columns(k);
    if (fin.empty()) throw Error("matrix is not regular: row " + std::to_string(k + 1) + " has no finite entry");
    for (std::size_t jj = 1; jj < fin.size(); ++jj) {
      for (std::size_t ii = 0; ii < jj; ++ii) {
        const std::size_t i = fin[ii], j = fin[jj];
        const Predicate p{i, j, checked_sub(a(k, j).value(), a(k, i).value()), true};
        auto idx = find_predicate(out.predicates, p);
        if (!idx) {
          idx = out.predicates.size();
          out.predicates.push_back(p);
        }
        out.by_row[k].push_back(*idx);
      }
    }
  }
  return out;
}

std::vector<Predicate> predicates_from_timediff(const Matrix& a, const TimeDiff& prop) {
  const std::size_t i = prop.index;
  if (i >= a.dim()) throw Error("proposition t" + std::to_string(i + 1) + " refers to a missing component");
  const bool s = !is_strict(prop.op);
  std::vector<Predicate> out;
  for (std::size_t j : a.finite_columns(i)) {
    if (j == i) continue;  // diagonal masked
    const Ticks aij = a(i, j).value();
    Predicate p = is_lower_bound(prop.op) ? Predicate{j, i, checked_sub(prop.alpha, aij), s}
                                          : Predicate{i, j, checked_sub(aij, prop.alpha), s};
    if (!find_predicate(out, p)) out.push_back(p);
  }
  return out;
}

std::vector<Cell> generate_abstract_states(std::span<const Predicate> predicates, std::size_t n) {
  std::vector<Cell> cells{Cell{{}, Dbm::universe(n)}};
  for (const Predicate& p : predicates) {
    const Dbm neg = p.negated().region(n);
    const Dbm pos = p.region(n);
    std::vector<Cell> next;
    next.reserve(cells.size() * 2);
    for (bool value : {false, true}) {
      for (const Cell& cell : cells) {
        auto r = intersect(cell.region, value ? pos : neg);
        if (!r) continue;
        Cell c{cell.valuation, std::move(*r)};
        c.valuation.push_back(value);
        next.push_back(std::move(c));
      }
    }
    cells = std::move(next);
  }
  return cells;
}

AffineDynamics affine_dynamics_for_state(const Matrix& a, const std::vector<bool>& valuation,
                                         std::span<const Predicate> predicates,
                                         const std::vector<std::vector<std::size_t>>& by_row) {
  std::vector<std::size_t> g(a.dim());
  for (std::size_t k = 0; k < a.dim(); ++k) {
    const auto fin = a.finite_columns(k);
    if (fin.empty()) throw Error("matrix is not regular: row " + std::to_string(k + 1) + " has no finite entry");
    // pairwise comparison is transitive on a cell, so a single scan finds the max
    std::size_t best = fin[0];
    for (std::size_t t = 1; t < fin.size(); ++t) {
      const std::size_t lo = std::min(best, fin[t]), hi = std::max(best, fin[t]);
      std::optional<std::size_t> id;
      for (std::size_t q : by_row[k]) {
        if (predicates[q].i == lo && predicates[q].j == hi &&
            predicates[q].c == a(k, hi).value() - a(k, lo).value()) {
          id = q;
          break;
        }
      }
      if (!id) throw InternalError("row predicate missing for columns " + std::to_string(lo + 1) + "," +
                                   std::to_string(hi + 1));
      best = valuation.at(*id) ? lo : hi;
    }
    g[k] = best;
  }
  return AffineDynamics::from_matrix(a, std::move(g));
}

bool AbstractState::has_label(std::size_t predicate) const {
  return std::binary_search(labels.begin(), labels.end(), predicate);
}

AbstractTransitionSystem::AbstractTransitionSystem(Matrix a, std::vector<Predicate> predicates,
                                                   std::vector<std::vector<std::size_t>> by_row,
                                                   std::vector<AbstractState> states, Dbm initial_set)
    : a_(std::move(a)),
      predicates_(std::move(predicates)),
      by_row_(std::move(by_row)),
      states_(std::move(states)),
      initial_(std::move(initial_set)) {
  std::sort(states_.begin(), states_.end(), [](const auto& x, const auto& y) { return x.id < y.id; });
  for (auto& s : states_) {
    s.initial = intersect(s.region, initial_).has_value();
    next_id_ = std::max(next_id_, s.id + 1);
  }
  rebuild_index();
  succ_.assign(states_.size(), {});
  for (std::size_t p = 0; p < states_.size(); ++p) {
    for (std::size_t q = 0; q < states_.size(); ++q) {
      if (reaches(states_[p], states_[q])) succ_[p].push_back(q);
    }
  }
}

void AbstractTransitionSystem::rebuild_index() {
  id_to_pos_.assign(static_cast<std::size_t>(next_id_), kNoPos);
  for (std::size_t p = 0; p < states_.size(); ++p) id_to_pos_[static_cast<std::size_t>(states_[p].id)] = p;
}

std::size_t AbstractTransitionSystem::position_of(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= id_to_pos_.size() || id_to_pos_[id] == kNoPos) {
    throw Error("no abstract state with id " + std::to_string(id));
  }
  return id_to_pos_[id];
}

bool AbstractTransitionSystem::reaches(const AbstractState& from, const AbstractState& to) const {
  return intersect(image(from.region, from.dynamics), to.region).has_value();
}

bool AbstractTransitionSystem::has_edge(int from, int to) const {
  const auto& s = succ_[position_of(from)];
  return std::binary_search(s.begin(), s.end(), position_of(to));
}

std::vector<std::pair<int, int>> AbstractTransitionSystem::edges() const {
  std::vector<std::pair<int, int>> out;
  for (std::size_t p = 0; p < states_.size(); ++p) {
    for (std::size_t q : succ_[p]) out.emplace_back(states_[p].id, states_[q].id);
  }
  return out;
}

std::vector<int> AbstractTransitionSystem::initial_ids() const {
  std::vector<int> out;
  for (const auto& s : states_) {
    if (s.initial) out.push_back(s.id);
  }
  return out;
}

int AbstractTransitionSystem::abstract(std::span<const Ticks> x) const {
  if (x.size() != dim()) throw Error("point dimension does not match the system");
  std::optional<int> hit;
  for (const auto& s : states_) {
    if (!contains(s.region, x)) continue;
    if (hit) throw InternalError("abstract regions overlap");
    hit = s.id;
  }
  if (!hit) throw InternalError("point lies outside every abstract region");
  return *hit;
}

std::vector<int> AbstractTransitionSystem::replace_state(int id, const std::vector<Dbm>& cells) {
  const std::size_t pivot = position_of(id);
  const AbstractState parent = states_[pivot];

  // successor ids of the surviving states, pivot dropped
  std::vector<std::set<int>> succ_ids;
  std::vector<AbstractState> kept;
  std::vector<bool> had_pivot;
  for (std::size_t p = 0; p < states_.size(); ++p) {
    if (p == pivot) continue;
    std::set<int> ids;
    bool hp = false;
    for (std::size_t q : succ_[p]) {
      if (q == pivot) hp = true;
      else ids.insert(states_[q].id);
    }
    kept.push_back(std::move(states_[p]));
    succ_ids.push_back(std::move(ids));
    had_pivot.push_back(hp);
  }

  std::vector<AbstractState> fresh;
  std::vector<int> new_ids;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    AbstractState s = parent;
    s.id = next_id_++;
    s.name = parent.name + (cells.size() <= 26 ? std::string(1, static_cast<char>('a' + k)) : "_" + std::to_string(k));
    s.region = cells[k];
    s.initial = intersect(s.region, initial_).has_value();
    new_ids.push_back(s.id);
    fresh.push_back(std::move(s));
  }

  for (std::size_t p = 0; p < kept.size(); ++p) {
    if (!had_pivot[p]) continue;
    for (const auto& f : fresh) {
      if (reaches(kept[p], f)) succ_ids[p].insert(f.id);
    }
  }
  std::vector<std::set<int>> fresh_succ(fresh.size());
  for (std::size_t f = 0; f < fresh.size(); ++f) {
    for (const auto& s : kept) {
      if (reaches(fresh[f], s)) fresh_succ[f].insert(s.id);
    }
    for (const auto& t : fresh) {
      if (reaches(fresh[f], t)) fresh_succ[f].insert(t.id);
    }
  }

  states_ = std::move(kept);
  for (auto& f : fresh) states_.push_back(std::move(f));
  succ_ids.insert(succ_ids.end(), fresh_succ.begin(), fresh_succ.end());
  rebuild_index();
  succ_.assign(states_.size(), {});
  for (std::size_t p = 0; p < states_.size(); ++p) {
    for (int t : succ_ids[p]) succ_[p].push_back(position_of(t));
    std::sort(succ_[p].begin(), succ_[p].end());
  }
  return new_ids;
}

std::vector<int> initial_states(const AbstractTransitionSystem& ts, const Dbm& x) {
  std::vector<int> out;
  for (const auto& s : ts.states()) {
    if (intersect(s.region, x)) out.push_back(s.id);
  }
  return out;
}

AbstractTransitionSystem build_abstraction(const Matrix& a, std::span<const TimeDiff> propositions,
                                           const std::optional<Dbm>& initial_set) {
  const std::size_t n = a.dim();
  if (initial_set && initial_set->dim() != n) throw Error("initial set dimension does not match the matrix");
  MatrixPredicates mp = predicates_from_matrix(a);
  std::vector<Predicate> all = mp.predicates;
  for (const auto& prop : propositions) {
    for (const auto& p : predicates_from_timediff(a, prop)) {
      if (!find_predicate(all, p)) all.push_back(p);
    }
  }
  auto cells = generate_abstract_states(all, n);
  std::vector<AbstractState> states;
  states.reserve(cells.size());
  for (std::size_t k = 0; k < cells.size(); ++k) {
    AbstractState s;
    s.id = static_cast<int>(k);
    s.name = "s" + std::to_string(k);
    s.dynamics = affine_dynamics_for_state(a, cells[k].valuation, all, mp.by_row);
    for (std::size_t q = 0; q < all.size(); ++q) {
      if (cells[k].valuation[q]) s.labels.push_back(q);
    }
    s.valuation = std::move(cells[k].valuation);
    s.region = std::move(cells[k].region);
    states.push_back(std::move(s));
  }
  Dbm x = initial_set ? *initial_set : Dbm::universe(n);
  return AbstractTransitionSystem(a, std::move(all), std::move(mp.by_row), std::move(states), std::move(x));
}

}  // namespace mplv
