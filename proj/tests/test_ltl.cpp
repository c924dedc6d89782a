#include <doctest.h>

#include <random>

#include "mplv/ltl.hpp"

using namespace mplv;
using namespace mplv::ltl;

namespace {

constexpr Ticks U = 1'000'000;

TimeDiff td(std::size_t i, Cmp op, Ticks a) { return TimeDiff{i, op, a * U}; }

// Direct semantics on the infinite word given by `len` positions looping to
// `loop`; witnesses are searched over one full unrolling.
struct Lasso {
  std::vector<std::vector<char>> labels;  // labels[pos][pred]
  std::size_t loop;

  std::size_t norm(std::size_t p) const {
    const std::size_t len = labels.size();
    if (p < len) return p;
    return loop + (p - loop) % (len - loop);
  }

  bool holds(const Formula& f, std::size_t i) const {
    const std::size_t len = labels.size();
    switch (f->kind) {
      case Kind::True: return true;
      case Kind::False: return false;
      case Kind::Pred: return labels[norm(i)][f->pred];
      case Kind::TimeDiff: return false;
      case Kind::Not: return !holds(f->lhs, i);
      case Kind::And: return holds(f->lhs, i) && holds(f->rhs, i);
      case Kind::Or: return holds(f->lhs, i) || holds(f->rhs, i);
      case Kind::Next: return holds(f->lhs, i + 1);
      case Kind::Until:
        for (std::size_t j = i; j <= i + len; ++j) {
          if (holds(f->rhs, j)) return true;
          if (!holds(f->lhs, j)) return false;
        }
        return false;
      case Kind::Release:
        for (std::size_t j = i; j <= i + len; ++j) {
          if (!holds(f->rhs, j)) return false;
          if (holds(f->lhs, j)) return true;
        }
        return true;
    }
    return false;
  }
};

// Bounded no-loop semantics on a finite path of k+1 states, NNF input.
struct Finite {
  std::vector<std::vector<char>> labels;

  bool holds(const Formula& f, std::size_t i) const {
    const std::size_t k = labels.size() - 1;
    switch (f->kind) {
      case Kind::True: return true;
      case Kind::False: return false;
      case Kind::Pred: return labels[i][f->pred];
      case Kind::TimeDiff: return false;
      case Kind::Not: return !labels[i][f->lhs->pred];
      case Kind::And: return holds(f->lhs, i) && holds(f->rhs, i);
      case Kind::Or: return holds(f->lhs, i) || holds(f->rhs, i);
      case Kind::Next: return i < k && holds(f->lhs, i + 1);
      case Kind::Until:
        for (std::size_t j = i; j <= k; ++j) {
          if (holds(f->rhs, j)) return true;
          if (!holds(f->lhs, j)) return false;
        }
        return false;
      case Kind::Release:
        for (std::size_t j = i; j <= k; ++j) {
          if (!holds(f->rhs, j)) return false;
          if (holds(f->lhs, j)) return true;
        }
        return false;
    }
    return false;
  }
};

Formula random_formula(std::mt19937_64& rng, int depth, std::size_t preds) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 9);
  std::uniform_int_distribution<std::size_t> p(0, preds - 1);
  switch (pick(rng)) {
    case 0: return tt();
    case 1:
    case 2: return pred(p(rng));
    case 3: return neg(random_formula(rng, depth - 1, preds));
    case 4: return conj(random_formula(rng, depth - 1, preds), random_formula(rng, depth - 1, preds));
    case 5: return disj(random_formula(rng, depth - 1, preds), random_formula(rng, depth - 1, preds));
    case 6: return next(random_formula(rng, depth - 1, preds));
    case 7: return until(random_formula(rng, depth - 1, preds), random_formula(rng, depth - 1, preds));
    case 8: return release(random_formula(rng, depth - 1, preds), random_formula(rng, depth - 1, preds));
    default: return eventually(random_formula(rng, depth - 1, preds));
  }
}

std::vector<std::vector<char>> random_labels(std::mt19937_64& rng, std::size_t len, std::size_t preds) {
  std::bernoulli_distribution b(0.5);
  std::vector<std::vector<char>> out(len, std::vector<char>(preds));
  for (auto& row : out)
    for (auto& v : row) v = b(rng);
  return out;
}

}  // namespace

TEST_CASE("parsing and desugaring") {
  const Formula fg = parse("F G (t1 <= 5)");
  CHECK(equal(fg, eventually(always(atom(td(0, Cmp::Le, 5))))));
  CHECK(match_eventually_always(fg) == td(0, Cmp::Le, 5));
  CHECK(to_string(fg) == "F G (t1 <= 5)");

  const Formula u = parse("(t1 >= 2) U (t2 >= 3)");
  REQUIRE(u->kind == Kind::Until);
  CHECK(u->lhs->atom == td(0, Cmp::Ge, 2));
  CHECK(u->rhs->atom == td(1, Cmp::Ge, 3));

  CHECK(equal(parse("F t1 < 1"), parse("true U t1 < 1")));
  CHECK(equal(parse("G t1 < 1"), parse("! F ! t1 < 1")));
  CHECK(equal(parse("GF t1 > 2"), parse("G F t1 > 2")));
}

TEST_CASE("precedence and associativity") {
  const Formula a = atom(td(0, Cmp::Lt, 1)), b = atom(td(1, Cmp::Lt, 1)), c = atom(td(2, Cmp::Lt, 1));
  auto por = [](Formula x, Formula y) { return neg(conj(neg(x), neg(y))); };
  auto pimp = [](Formula x, Formula y) { return neg(conj(x, neg(y))); };
  CHECK(equal(parse("t1<1 | t2<1 & t3<1"), por(a, conj(b, c))));
  CHECK(equal(parse("t1<1 -> t2<1 -> t3<1"), normalize(pimp(a, pimp(b, c)))));
  CHECK(equal(parse("t1<1 U t2<1 U t3<1"), until(a, until(b, c))));
  CHECK(equal(parse("!t1<1 U t2<1"), until(neg(a), b)));
  CHECK(equal(parse("X t1<1 U t2<1"), until(next(a), b)));
  CHECK(equal(parse("t1<1 & t2<1 U t3<1"), conj(a, until(b, c))));
  CHECK(equal(parse("t1<1 && t2<1 || t3<1"), por(conj(a, b), c)));
  CHECK(equal(parse("!!t1<1"), a));
  CHECK(equal(parse("false"), neg(tt())));
  CHECK(parse("t2 >= -1.5")->atom == TimeDiff{1, Cmp::Ge, -1'500'000});
}

TEST_CASE("syntax errors carry positions") {
  auto pos_of = [](const char* text) -> std::optional<std::size_t> {
    try {
      parse(text);
    } catch (const ParseError& e) {
      return e.position();
    }
    return std::nullopt;
  };
  CHECK(pos_of("t1 <= 5))") == 7u);
  CHECK(pos_of("t1 5") == 3u);
  CHECK(pos_of("") == 0u);
  CHECK(pos_of("(t1 < 1") == 7u);
  CHECK(pos_of("t1 <= 5 &") == 9u);
  CHECK(pos_of("t0 < 1").has_value());
  CHECK(pos_of("y1 < 1") == 0u);
  CHECK(pos_of("t1 < 1 $") == 7u);
  CHECK(pos_of("t1 < 1.0000001").has_value());
  CHECK_FALSE(pos_of("G (t1 <= 5 -> X t2 > 3)").has_value());
}

TEST_CASE("index checks are deferred") {
  const Formula f = parse("F t3 < 1");
  CHECK_NOTHROW(check_indices(f, 3));
  CHECK_THROWS_AS(check_indices(f, 2), Error);
  CHECK(atoms(parse("t2<1 U (t1>2 & t2<1)")) == std::vector<TimeDiff>{td(1, Cmp::Lt, 1), td(0, Cmp::Gt, 2)});
}

TEST_CASE("lasso evaluation matches the direct semantics") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 3000; ++t) {
    const Formula f = random_formula(rng, 4, 3);
    const std::size_t len = 1 + t % 6;
    const std::size_t loop = std::uniform_int_distribution<std::size_t>(0, len - 1)(rng);
    const Lasso w{random_labels(rng, len, 3), loop};
    auto leaf = [&](std::size_t i, const Node& n) { return static_cast<bool>(w.labels[i][n.pred]); };
    const bool expect = w.holds(f, 0);
    CHECK(evaluate(f, len, loop, leaf) == expect);
    CHECK(evaluate(nnf(f), len, loop, leaf) == expect);
    CHECK(evaluate(simplify(f), len, loop, leaf) == expect);
    CHECK(evaluate(normalize(f), len, loop, leaf) == expect);
    CHECK(is_nnf(nnf(f)));
  }
}

TEST_CASE("no-loop evaluation matches the bounded semantics") {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 3000; ++t) {
    const Formula f = nnf(random_formula(rng, 4, 3));
    const Finite w{random_labels(rng, 1 + t % 6, 3)};
    auto leaf = [&](std::size_t i, const Node& n) { return static_cast<bool>(w.labels[i][n.pred]); };
    const bool bounded = evaluate(f, w.labels.size(), std::nullopt, leaf);
    CHECK(bounded == w.holds(f, 0));
    if (bounded) {
      // a bounded witness extends to every infinite continuation
      for (std::size_t loop = 0; loop < w.labels.size(); ++loop) CHECK(evaluate(f, w.labels.size(), loop, leaf));
    }
  }
  CHECK_THROWS_AS(evaluate(neg(next(pred(0))), 2, std::nullopt, [](std::size_t, const Node&) { return true; }), Error);
  // G p has no finite witness
  CHECK_FALSE(evaluate(nnf(always(pred(0))), 3, std::nullopt, [](std::size_t, const Node&) { return true; }));
}

TEST_CASE("progression peels one position off the word") {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 3000; ++t) {
    const Formula f = nnf(random_formula(rng, 4, 3));
    const std::size_t len = 2 + t % 5;
    const std::size_t loop = std::uniform_int_distribution<std::size_t>(0, len - 1)(rng);
    const Lasso w{random_labels(rng, len, 3), loop};
    const Formula rest = progress(f, [&](const Node& n) { return static_cast<bool>(w.labels[0][n.pred]); });
    // suffix word starting at position 1
    Lasso tail;
    if (loop >= 1) {
      tail = Lasso{{w.labels.begin() + 1, w.labels.end()}, loop - 1};
    } else {
      tail.labels.assign(w.labels.begin() + 1, w.labels.end());
      tail.labels.push_back(w.labels[0]);
      tail.loop = 0;
    }
    CHECK(w.holds(f, 0) == tail.holds(rest, 0));
    if (rest->kind == Kind::False) CHECK_FALSE(w.holds(f, 0));
  }
}

TEST_CASE("substitution and simplification") {
  const Formula f = parse("(t1 >= 2) U (t2 >= 3)");
  const Formula g = simplify(substitute(f, [](const TimeDiff& a) { return a.index == 1 ? tt() : atom(a); }));
  CHECK(g->kind == Kind::True);
  const Formula h = simplify(substitute(parse("F (t2 <= 2)"), [](const TimeDiff&) { return ff(); }));
  CHECK(h->kind == Kind::False);
  CHECK(simplify(parse("G F t1 < 1"))->kind == Kind::Not);
}
