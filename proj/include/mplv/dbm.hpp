#pragma once

// Pure-difference DBMs: conjunctions of x_i - x_j <= c / x_i - x_j < c over
// n real variables. There is no reference clock, so every represented set is
// invariant under x -> x + α·1.

#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "mplv/fixed.hpp"
#include "mplv/maxplus.hpp"

namespace mplv {

class Bound {
 public:
  constexpr Bound() = default;  // +∞, no constraint

  static constexpr Bound unbounded() { return Bound(); }
  static constexpr Bound le(Ticks v) { return Bound(v, false); }
  static constexpr Bound lt(Ticks v) { return Bound(v, true); }

  constexpr bool is_infinite() const { return infinite_; }
  constexpr bool is_strict() const { return strict_; }
  Ticks value() const;

  // (v,<) < (v,<=) < (v',·) for v < v'; +∞ is the top element.
  friend bool operator<(const Bound& a, const Bound& b);
  friend bool operator<=(const Bound& a, const Bound& b) { return !(b < a); }
  friend constexpr bool operator==(const Bound&, const Bound&) = default;

  // Value addition, strictness OR, +∞ absorbing.
  friend Bound operator+(const Bound& a, const Bound& b);

  // Shift the value by delta (finite bounds only change).
  Bound shifted(Ticks delta) const;

 private:
  constexpr Bound(Ticks v, bool strict) : value_(v), strict_(strict), infinite_(false) {}

  Ticks value_ = 0;
  bool strict_ = false;
  bool infinite_ = true;
};

class Dbm {
 public:
  Dbm() = default;
  static Dbm universe(std::size_t n);

  std::size_t dim() const { return n_; }
  bool is_canonical() const { return canonical_; }

  // Bound on x_i - x_j.
  const Bound& at(std::size_t i, std::size_t j) const { return bounds_[i * n_ + j]; }

  // Conjoin x_i - x_j <=/< bound. Clears the canonical flag when it tightens.
  void constrain(std::size_t i, std::size_t j, Bound bound);

  // Structural equality of the bound matrices; meaningful on canonical DBMs.
  friend bool operator==(const Dbm& a, const Dbm& b) { return a.n_ == b.n_ && a.bounds_ == b.bounds_; }
  // Lexicographic order on the bound matrices, for deterministic sorting.
  friend bool operator<(const Dbm& a, const Dbm& b);

 private:
  friend std::optional<Dbm> canonicalize(Dbm d);

  std::size_t n_ = 0;
  std::vector<Bound> bounds_;
  bool canonical_ = true;
};

// Empty sets are represented by std::nullopt.
using MaybeDbm = std::optional<Dbm>;

// All-pairs shortest-path closure; nullopt iff the constraints are unsatisfiable.
MaybeDbm canonicalize(Dbm d);
MaybeDbm intersect(const Dbm& a, const Dbm& b);
bool contains(const Dbm& d, std::span<const Ticks> x);
// d ⊆ e, both canonical.
bool is_subset(const Dbm& d, const Dbm& e);

// x_i(k+1) = x_{g_i}(k) + offsets_i, the affine piece of the max-plus
// dynamics that is active on one region.
struct AffineDynamics {
  std::vector<std::size_t> g;
  std::vector<Ticks> offsets;

  static AffineDynamics from_matrix(const Matrix& a, std::vector<std::size_t> g);
  static AffineDynamics identity(std::size_t n);

  std::size_t dim() const { return g.size(); }
  Point apply(std::span<const Ticks> x) const;

  friend bool operator==(const AffineDynamics&, const AffineDynamics&) = default;
};

// Forward image of a canonical non-empty DBM. The result is canonical.
Dbm image(const Dbm& d, const AffineDynamics& dyn);
// {x : dyn(x) ∈ d}; may be empty.
MaybeDbm preimage(const Dbm& d, const AffineDynamics& dyn);

// One constraint per line: `x<i> - x<j> <op> <c>`, 1-based indices.
std::string dump(const Dbm& d, Scale scale = {});
// Single-line rendering of the same constraints joined by " & "; "true" for
// the universe.
std::string describe(const Dbm& d, Scale scale = {});

// Deterministic point of a non-empty canonical DBM with x_n = 0. Chooses
// midpoints of bounded coordinate ranges. nullopt when a strict range is too
// thin to contain a tick.
std::optional<Point> pick_point(const Dbm& d);

// Random point of a non-empty canonical DBM with x_n = 0 and every other
// coordinate within ±span ticks where the DBM allows. Rejection sampling on
// the bounding box, falling back to coordinate-wise sampling for thin sets.
std::optional<Point> sample_point(const Dbm& d, std::mt19937_64& rng, Ticks span);

}  // namespace mplv
