#include "mplv/bmc.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace mplv {

std::vector<int> AbstractPath::stem() const {
  if (kind == PathKind::NoLoop) return states;
  return {states.begin(), states.begin() + static_cast<std::ptrdiff_t>(loop_start)};
}

std::vector<int> AbstractPath::loop() const {
  if (kind == PathKind::NoLoop) return {};
  return {states.begin() + static_cast<std::ptrdiff_t>(loop_start), states.end()};
}

std::string AbstractPath::to_string(const AbstractTransitionSystem& ts) const {
  auto names = [&](const std::vector<int>& ids) {
    std::string s;
    for (int id : ids) s += (s.empty() ? "" : " ") + ts.state(id).name;
    return s;
  };
  if (kind == PathKind::NoLoop) return names(states);
  return names(stem()) + " (" + names(loop()) + ")^w";
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::Holds: return "holds";
    case Outcome::Violated: return "violated";
    case Outcome::Undecided: return "undecided";
  }
  return "?";
}

namespace {

bool primitive(std::span<const std::size_t> v) {
  const std::size_t m = v.size();
  for (std::size_t d = 1; d < m; ++d) {
    if (m % d != 0) continue;
    bool periodic = true;
    for (std::size_t t = d; t < m && periodic; ++t) periodic = v[t] == v[t - d];
    if (periodic) return false;
  }
  return true;
}

struct FormulaLess {
  bool operator()(const ltl::Formula& a, const ltl::Formula& b) const { return ltl::compare(a, b) < 0; }
};

class Search {
 public:
  Search(const AbstractTransitionSystem& ts, ltl::Formula violation, std::size_t k, std::optional<LassoShape> shape)
      : ts_(ts), violation_(std::move(violation)), k_(k), shape_(shape), n_(ts.size()) {}

  std::optional<AbstractPath> run() {
    for (std::size_t p = 0; p < n_; ++p) {
      if (!ts_.states()[p].initial) continue;
      path_.assign(1, p);
      on_path_.assign(n_, 0);
      on_path_[p] = 1;
      if (simple_dfs(violation_)) return noloop_;
    }
    return lasso();
  }

 private:
  bool label(std::size_t pos, const ltl::Node& leaf) const {
    if (leaf.kind != ltl::Kind::Pred) throw InternalError("search formula still holds propositions");
    return ts_.states()[pos].has_label(leaf.pred);
  }

  ltl::Formula step(const ltl::Formula& f, std::size_t pos) const {
    return ltl::progress(f, [&](const ltl::Node& leaf) { return label(pos, leaf); });
  }

  // No-loop witnesses: paths of pairwise distinct states, in lexicographic order.
  bool simple_dfs(const ltl::Formula& obligation) {
    const std::size_t here = path_.back();
    const ltl::Formula rest = step(obligation, here);
    if (rest->kind == ltl::Kind::False) return false;
    if (path_.size() == k_ + 1) {
      auto at = [&](std::size_t i, const ltl::Node& leaf) { return label(path_[i], leaf); };
      if (!ltl::evaluate(violation_, path_.size(), std::nullopt, at)) return false;
      noloop_ = make_path(path_, PathKind::NoLoop, 0);
      return true;
    }
    for (std::size_t q : ts_.successors(here)) {
      if (on_path_[q]) continue;
      path_.push_back(q);
      on_path_[q] = 1;
      const bool done = simple_dfs(rest);
      on_path_[q] = 0;
      path_.pop_back();
      if (done) return true;
    }
    return false;
  }

  std::size_t max_loop() const {
    std::size_t m = k_;
    if (shape_) m = std::min(m, shape_->period);
    return m;
  }

  bool loop_length_ok(std::size_t m) const {
    if (m > k_) return false;
    if (shape_ && (shape_->period % m != 0 || k_ - m > shape_->max_stem)) return false;
    return true;
  }

  // reach[r][p]: p reaches target in exactly r steps
  std::vector<std::vector<char>> exact_reach(std::size_t target, std::size_t max_r) const {
    std::vector<std::vector<char>> reach(max_r + 1, std::vector<char>(n_, 0));
    reach[0][target] = 1;
    for (std::size_t r = 1; r <= max_r; ++r)
      for (std::size_t p = 0; p < n_; ++p)
        for (std::size_t q : ts_.successors(p))
          if (reach[r - 1][q]) {
            reach[r][p] = 1;
            break;
          }
    return reach;
  }

  // A lasso is stored as stem s_0..s_l and loop s_{l+1}..s_k with s_k = s_l;
  // candidates are ordered by (loop, stem). Loops are enumerated in that
  // order by a preorder walk, then the first stem that works is taken.
  std::optional<AbstractPath> lasso() {
    const std::size_t max_m = max_loop();
    from_init_.assign(k_ + 1, std::vector<char>(n_, 0));
    for (std::size_t p = 0; p < n_; ++p) from_init_[0][p] = ts_.states()[p].initial;
    for (std::size_t r = 1; r <= k_; ++r)
      for (std::size_t p = 0; p < n_; ++p)
        if (from_init_[r - 1][p])
          for (std::size_t q : ts_.successors(p)) from_init_[r][q] = 1;
    for (std::size_t w0 = 0; w0 < n_; ++w0) {
      reach_ = exact_reach(w0, max_m);
      loop_.assign(1, w0);
      if (auto found = loop_dfs(max_m)) return found;
    }
    return std::nullopt;
  }

  std::optional<AbstractPath> loop_dfs(std::size_t max_m) {
    const std::size_t m = loop_.size();
    const std::size_t last = loop_.back();
    if (loop_length_ok(m) && from_init_[k_ - m][last] && has_edge(last, loop_[0]) && primitive(loop_)) {
      if (auto found = best_stem()) return found;
    }
    if (m == max_m) return std::nullopt;
    for (std::size_t q : ts_.successors(last)) {
      bool can_close = false;
      for (std::size_t r = 1; m + r <= max_m && !can_close; ++r) can_close = reach_[r][q] && loop_length_ok(m + r);
      if (!can_close) continue;
      loop_.push_back(q);
      auto found = loop_dfs(max_m);
      loop_.pop_back();
      if (found) return found;
    }
    return std::nullopt;
  }

  bool cycle_satisfies(const ltl::Formula& f) {
    auto it = cycle_memo_.find(f);
    if (it != cycle_memo_.end()) return it->second;
    auto at = [&](std::size_t i, const ltl::Node& leaf) { return label(cycle_[i], leaf); };
    const bool ok = ltl::evaluate(f, cycle_.size(), 0, at);
    cycle_memo_.emplace(f, ok);
    return ok;
  }

  std::optional<AbstractPath> best_stem() {
    const std::size_t m = loop_.size();
    // the word enters the cycle at the last loop state
    entry_ = loop_.back();
    cycle_.assign(1, entry_);
    cycle_.insert(cycle_.end(), loop_.begin(), loop_.end() - 1);
    stem_len_ = k_ - m;
    cycle_memo_.clear();
    dead_.assign(stem_len_ + 1, {});
    stem_.clear();
    if (stem_len_ == 0) {
      if (!ts_.states()[entry_].initial || !cycle_satisfies(violation_)) return std::nullopt;
    } else {
      stem_reach_ = exact_reach(entry_, stem_len_);
      bool found = false;
      for (std::size_t p = 0; p < n_ && !found; ++p) {
        if (!ts_.states()[p].initial) continue;
        stem_.assign(1, p);
        found = stem_dfs(violation_);
      }
      if (!found) return std::nullopt;
    }
    std::vector<std::size_t> full = stem_;
    full.push_back(entry_);
    full.insert(full.end(), loop_.begin(), loop_.end());
    return make_path(full, PathKind::Lasso, stem_len_ + 1);
  }

  // Extends stem_ (positions 0..i) to stem_len_ states in lexicographic order.
  bool stem_dfs(const ltl::Formula& obligation) {
    const std::size_t i = stem_.size() - 1;
    const std::size_t here = stem_.back();
    if (!stem_reach_[stem_len_ - i][here]) return false;
    const ltl::Formula rest = step(obligation, here);
    if (rest->kind == ltl::Kind::False) return false;
    auto key = std::make_pair(here, rest);
    if (dead_[i].count(key)) return false;
    bool ok = false;
    if (i + 1 == stem_len_) {
      ok = here != cycle_.back() && cycle_satisfies(rest);
    } else {
      for (std::size_t q : ts_.successors(here)) {
        stem_.push_back(q);
        ok = stem_dfs(rest);
        if (ok) break;
        stem_.pop_back();
      }
    }
    if (!ok) dead_[i].insert(key);
    return ok;
  }

  bool has_edge(std::size_t p, std::size_t q) const {
    const auto& s = ts_.successors(p);
    return std::binary_search(s.begin(), s.end(), q);
  }

  AbstractPath make_path(const std::vector<std::size_t>& positions, PathKind kind, std::size_t l) const {
    AbstractPath p;
    p.kind = kind;
    p.loop_start = l;
    for (std::size_t pos : positions) p.states.push_back(ts_.states()[pos].id);
    return p;
  }

  struct KeyLess {
    bool operator()(const std::pair<std::size_t, ltl::Formula>& a, const std::pair<std::size_t, ltl::Formula>& b) const {
      if (a.first != b.first) return a.first < b.first;
      return ltl::compare(a.second, b.second) < 0;
    }
  };

  const AbstractTransitionSystem& ts_;
  ltl::Formula violation_;
  std::size_t k_;
  std::optional<LassoShape> shape_;
  std::size_t n_;
  std::vector<std::size_t> path_;
  std::vector<char> on_path_;
  std::optional<AbstractPath> noloop_;
  std::vector<std::size_t> loop_;
  std::vector<std::size_t> cycle_;
  std::size_t entry_ = 0;
  std::vector<std::size_t> stem_;
  std::size_t stem_len_ = 0;
  std::vector<std::vector<char>> reach_;
  std::vector<std::vector<char>> from_init_;
  std::vector<std::vector<char>> stem_reach_;
  std::map<ltl::Formula, bool, FormulaLess> cycle_memo_;
  std::vector<std::set<std::pair<std::size_t, ltl::Formula>, KeyLess>> dead_;
};

}  // namespace

std::optional<AbstractPath> find_counterexample(const AbstractTransitionSystem& ts, const ltl::Formula& phi,
                                                std::size_t k, std::optional<LassoShape> shape) {
  if (k == 0) throw Error("counterexample length must be positive");
  const ltl::Formula violation = ltl::simplify(ltl::nnf(ltl::neg(phi)));
  if (violation->kind == ltl::Kind::False) return std::nullopt;
  return Search(ts, violation, k, shape).run();
}

SpuriousnessResult is_spurious_noloop(const AbstractTransitionSystem& ts, std::span<const int> states, const Dbm& x) {
  SpuriousnessResult r;
  if (states.empty()) throw Error("empty path");
  auto d = intersect(ts.state(states[0]).region, x);
  if (!d) {
    r.status = PathStatus::Spurious;
    return r;
  }
  r.witnesses.push_back(std::move(*d));
  for (std::size_t t = 1; t < states.size(); ++t) {
    const AbstractState& prev = ts.state(states[t - 1]);
    auto e = intersect(image(r.witnesses.back(), prev.dynamics), ts.state(states[t]).region);
    if (!e) {
      r.status = PathStatus::Spurious;
      r.pivot = r.witnesses.size() - 1;
      return r;
    }
    r.witnesses.push_back(std::move(*e));
  }
  return r;
}

SpuriousnessResult is_spurious_lasso(const AbstractTransitionSystem& ts, const AbstractPath& path, const Dbm& x,
                                     std::size_t max_iter) {
  if (path.kind != PathKind::Lasso) throw Error("not a lasso path");
  const auto stem = path.stem();
  const auto loop = path.loop();
  SpuriousnessResult r = is_spurious_noloop(ts, stem, x);
  if (r.status == PathStatus::Spurious) return r;
  const std::size_t m = loop.size();
  std::vector<std::set<Dbm>> seen(m);
  int prev = stem.back();
  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    for (std::size_t p = 0; p < m; ++p) {
      auto e = intersect(image(r.witnesses.back(), ts.state(prev).dynamics), ts.state(loop[p]).region);
      if (!e) {
        r.status = PathStatus::Spurious;
        r.pivot = pivot_of(r.witnesses.size(), stem.size(), m);
        return r;
      }
      r.witnesses.push_back(*e);
      prev = loop[p];
      if (!seen[p].insert(std::move(*e)).second) {
        r.status = PathStatus::Real;
        return r;
      }
    }
  }
  r.status = PathStatus::Undecided;
  return r;
}

std::size_t pivot_of(std::size_t d_len, std::size_t stem_states, std::size_t loop_len) {
  if (d_len == 0) throw Error("empty DBM chain has no pivot");
  if (d_len <= stem_states) return d_len - 1;
  if (loop_len == 0) throw Error("chain longer than a loop-free path");
  const std::size_t phase = (d_len - stem_states - 1) % loop_len + 1;
  return stem_states + phase - 1;
}

std::vector<int> refine(AbstractTransitionSystem& ts, int pivot_id) {
  const std::size_t pos = ts.position_of(pivot_id);
  const AbstractState& pivot = ts.states()[pos];
  const auto& succ = ts.successors(pos);
  if (succ.size() < 2) throw InternalError("pivot " + pivot.name + " has fewer than two successors");
  std::vector<Dbm> cells;
  for (std::size_t q : succ) {
    auto pre = preimage(ts.states()[q].region, pivot.dynamics);
    if (!pre) continue;
    auto cell = intersect(pivot.region, *pre);
    if (cell) cells.push_back(std::move(*cell));
  }
  if (cells.size() < 2) throw InternalError("splitting " + pivot.name + " produced fewer than two cells");
  std::sort(cells.begin(), cells.end());
  return ts.replace_state(pivot_id, cells);
}

std::size_t completeness_threshold(const Matrix& a, std::size_t abstract_states) {
  if (is_irreducible(a)) {
    const SpectralProfile sp = transient_cyclicity(a);
    return sp.transient + sp.cyclicity;
  }
  return abstract_states + 1;
}

namespace {

std::size_t next_depth(const ltl::Formula& f) {
  if (!f) return 0;
  const std::size_t below = std::max(next_depth(f->lhs), next_depth(f->rhs));
  return below + (f->kind == ltl::Kind::Next ? 1 : 0);
}

// enough steps to see a lasso settle, and for no-loop witnesses enough to
// evaluate the X operators that the direct check folded into constants
std::size_t concretize_extra(const Matrix& a, const ltl::Formula& phi) {
  std::size_t extra = a.dim() + 1;
  if (is_irreducible(a)) {
    const SpectralProfile sp = transient_cyclicity(a);
    extra = sp.transient + sp.cyclicity;
  }
  return extra + next_depth(phi);
}

}  // namespace

Verdict verify(const Matrix& a, const std::optional<Dbm>& x, const ltl::Formula& phi, VerifyOptions options) {
  if (!is_regular(a)) throw Error("matrix is not regular");
  if (x && x->dim() != a.dim()) throw Error("initial set dimension does not match the matrix");
  Verdict v;
  const DirectResult direct = direct_check(a, phi);
  if (direct.verdict != Tri::Unknown) {
    v.outcome = direct.verdict == Tri::True ? Outcome::Holds : Outcome::Violated;
    v.reason = direct.reason;
    v.direct = true;
    return v;
  }
  const std::vector<TimeDiff> props = ltl::atoms(direct.residual);
  v.abstraction.emplace(build_abstraction(a, props, x));
  AbstractTransitionSystem& ts = *v.abstraction;
  v.checked = translate(direct.residual, ts);
  const bool irreducible = is_irreducible(a);
  std::size_t ct = completeness_threshold(a, ts.size());
  std::optional<LassoShape> shape;
  if (irreducible) {
    const SpectralProfile sp = transient_cyclicity(a);
    shape = LassoShape{sp.transient, sp.cyclicity};
  }
  for (std::size_t k = 1; k <= ct; ++k) {
    v.bound = k;
    for (;;) {
      auto path = find_counterexample(ts, v.checked, k, shape);
      if (!path) break;
      SpuriousnessResult res = path->kind == PathKind::NoLoop
                                   ? is_spurious_noloop(ts, path->states, ts.initial_set())
                                   : is_spurious_lasso(ts, *path, ts.initial_set(), options.max_iter);
      if (res.status == PathStatus::Real) {
        v.outcome = Outcome::Violated;
        v.reason = path->kind == PathKind::NoLoop ? "bmc: no-loop counterexample" : "bmc: lasso counterexample";
        v.trace = concretize(ts, *path, ts.initial_set(), concretize_extra(a, phi));
        v.counterexample = std::move(*path);
        v.witnesses = std::move(res.witnesses);
        v.threshold = ct;
        return v;
      }
      if (res.status == PathStatus::Undecided) {
        v.outcome = Outcome::Undecided;
        v.reason = "lasso periodicity not found within " + std::to_string(options.max_iter) + " iterations";
        v.counterexample = std::move(*path);
        v.threshold = ct;
        return v;
      }
      if (v.refinements.size() >= options.max_refinements) {
        v.outcome = Outcome::Undecided;
        v.reason = "refinement limit reached";
        v.threshold = ct;
        return v;
      }
      RefinementRecord rec;
      rec.k = k;
      rec.pivot = path->states[res.pivot];
      rec.pivot_name = ts.state(rec.pivot).name;
      rec.path_text = path->to_string(ts);
      rec.path = std::move(*path);
      rec.witnesses = std::move(res.witnesses);
      rec.cells = refine(ts, rec.pivot);
      v.refinements.push_back(std::move(rec));
      if (!irreducible) ct = std::max(ct, completeness_threshold(a, ts.size()));
    }
  }
  v.outcome = Outcome::Holds;
  v.reason = "bmc: no counterexample up to the completeness threshold";
  v.threshold = ct;
  return v;
}

std::optional<ConcreteTrace> concretize(const AbstractTransitionSystem& ts, const AbstractPath& path, const Dbm& x,
                                        std::size_t extra) {
  ConcreteTrace trace;
  std::vector<int> word;
  if (path.kind == PathKind::NoLoop) {
    word = path.states;
  } else {
    trace.stem = path.loop_start - 1;
    trace.period = path.length() - trace.stem;
    const std::size_t horizon = trace.stem + 2 * trace.period + extra;
    for (std::size_t t = 0; t < horizon; ++t) {
      word.push_back(t < trace.stem ? path.states[t] : path.states[trace.stem + (t - trace.stem) % trace.period]);
    }
  }
  // forward images, then pull the last set back to time 0
  std::vector<Dbm> chain;
  auto d = intersect(ts.state(word[0]).region, x);
  if (!d) return std::nullopt;
  chain.push_back(std::move(*d));
  for (std::size_t t = 1; t < word.size(); ++t) {
    auto e = intersect(image(chain.back(), ts.state(word[t - 1]).dynamics), ts.state(word[t]).region);
    if (!e) return std::nullopt;
    chain.push_back(std::move(*e));
  }
  Dbm back = chain.back();
  for (std::size_t t = word.size() - 1; t-- > 0;) {
    auto pre = preimage(back, ts.state(word[t]).dynamics);
    if (!pre) return std::nullopt;
    auto b = intersect(chain[t], *pre);
    if (!b) return std::nullopt;
    back = std::move(*b);
  }
  auto x0 = pick_point(back);
  if (!x0) return std::nullopt;
  trace.points.push_back(*x0);
  for (std::size_t t = 1; t < word.size(); ++t) trace.points.push_back(mat_vec(ts.matrix(), trace.points.back()));
  for (std::size_t t = 0; t < word.size(); ++t) {
    if (ts.abstract(trace.points[t]) != word[t]) throw InternalError("concrete trajectory left the abstract path");
  }
  if (path.kind == PathKind::NoLoop) {
    for (std::size_t t = 0; t < extra; ++t) trace.points.push_back(mat_vec(ts.matrix(), trace.points.back()));
  }
  return trace;
}

bool trace_violates(const Matrix& a, const ConcreteTrace& trace, const ltl::Formula& phi) {
  auto at = [&](std::size_t i, const ltl::Node& leaf) {
    if (leaf.kind != ltl::Kind::TimeDiff) throw Error("trace check expects a formula over propositions");
    return evaluate_timediff(a, trace.points[i], leaf.atom);
  };
  if (trace.period == 0) {
    return ltl::evaluate(ltl::nnf(ltl::neg(phi)), trace.points.size(), std::nullopt, at);
  }
  const auto props = ltl::atoms(phi);
  for (std::size_t t = trace.stem; t + trace.period < trace.points.size(); ++t) {
    for (const auto& p : props) {
      if (evaluate_timediff(a, trace.points[t], p) != evaluate_timediff(a, trace.points[t + trace.period], p)) {
        return false;
      }
    }
  }
  return !ltl::evaluate(phi, trace.stem + trace.period, trace.stem, at);
}

namespace {

void longest_real(const AbstractTransitionSystem& ts, std::vector<char>& on_path, std::size_t pos, const Dbm& d,
                  std::size_t depth, std::size_t& best) {
  best = std::max(best, depth);
  const AbstractState& s = ts.states()[pos];
  const Dbm img = image(d, s.dynamics);
  for (std::size_t q : ts.successors(pos)) {
    if (on_path[q]) continue;
    auto e = intersect(img, ts.states()[q].region);
    if (!e) continue;
    on_path[q] = 1;
    longest_real(ts, on_path, q, *e, depth + 1, best);
    on_path[q] = 0;
  }
}

}  // namespace

std::size_t empirical_threshold(const AbstractTransitionSystem& ts, const Dbm& x) {
  std::size_t best = 0;
  std::vector<char> on_path(ts.size(), 0);
  for (std::size_t p = 0; p < ts.size(); ++p) {
    auto d = intersect(ts.states()[p].region, x);
    if (!d) continue;
    on_path[p] = 1;
    longest_real(ts, on_path, p, *d, 0, best);
    on_path[p] = 0;
  }
  return best;
}

}  // namespace mplv
