#include "mplv/dbm.hpp"

#include <algorithm>
#include <sstream>

namespace mplv {

Ticks Bound::value() const {
  if (infinite_) throw InternalError("value() called on an infinite bound");
  return value_;
}

bool operator<(const Bound& a, const Bound& b) {
  if (a.infinite_) return false;
  if (b.infinite_) return true;
  if (a.value_ != b.value_) return a.value_ < b.value_;
  return a.strict_ && !b.strict_;
}

Bound operator+(const Bound& a, const Bound& b) {
  if (a.infinite_ || b.infinite_) return Bound::unbounded();
  return Bound(checked_add(a.value_, b.value_), a.strict_ || b.strict_);
}

Bound Bound::shifted(Ticks delta) const {
  if (infinite_) return *this;
  return Bound(checked_add(value_, delta), strict_);
}

Dbm Dbm::universe(std::size_t n) {
  Dbm d;
  d.n_ = n;
  d.bounds_.assign(n * n, Bound::unbounded());
  for (std::size_t i = 0; i < n; ++i) d.bounds_[i * n + i] = Bound::le(0);
  d.canonical_ = true;
  return d;
}

void Dbm::constrain(std::size_t i, std::size_t j, Bound bound) {
  Bound& slot = bounds_[i * n_ + j];
  if (bound < slot) {
    slot = bound;
    canonical_ = false;
  }
}

bool operator<(const Dbm& a, const Dbm& b) {
  if (a.n_ != b.n_) return a.n_ < b.n_;
  for (std::size_t k = 0; k < a.bounds_.size(); ++k) {
    if (a.bounds_[k] < b.bounds_[k]) return true;
    if (b.bounds_[k] < a.bounds_[k]) return false;
  }
  return false;
}

MaybeDbm canonicalize(Dbm d) {
  if (d.canonical_) return d;
  const std::size_t n = d.n_;
  auto& b = d.bounds_;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const Bound ik = b[i * n + k];
      if (ik.is_infinite()) continue;
      for (std::size_t j = 0; j < n; ++j) {
        const Bound via = ik + b[k * n + j];
        if (via < b[i * n + j]) b[i * n + j] = via;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (b[i * n + i] < Bound::le(0)) return std::nullopt;
    }
  }
  d.canonical_ = true;
  return d;
}

MaybeDbm intersect(const Dbm& a, const Dbm& b) {
  if (a.dim() != b.dim()) throw Error("DBM dimension mismatch in intersection");
  Dbm r = a;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < a.dim(); ++j) r.constrain(i, j, b.at(i, j));
  }
  return canonicalize(std::move(r));
}

bool contains(const Dbm& d, std::span<const Ticks> x) {
  if (x.size() != d.dim()) throw Error("point dimension does not match DBM");
  for (std::size_t i = 0; i < d.dim(); ++i) {
    for (std::size_t j = 0; j < d.dim(); ++j) {
      const Bound& bound = d.at(i, j);
      if (i == j || bound.is_infinite()) continue;
      const __int128 diff = static_cast<__int128>(x[i]) - x[j];
      if (bound.is_strict() ? !(diff < bound.value()) : !(diff <= bound.value())) return false;
    }
  }
  return true;
}

bool is_subset(const Dbm& d, const Dbm& e) {
  if (d.dim() != e.dim()) throw Error("DBM dimension mismatch in inclusion test");
  for (std::size_t i = 0; i < d.dim(); ++i) {
    for (std::size_t j = 0; j < d.dim(); ++j) {
      if (e.at(i, j) < d.at(i, j)) return false;
    }
  }
  return true;
}

AffineDynamics AffineDynamics::from_matrix(const Matrix& a, std::vector<std::size_t> g) {
  if (g.size() != a.dim()) throw Error("coefficient vector does not match matrix dimension");
  AffineDynamics dyn;
  dyn.offsets.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i] >= a.dim() || a(i, g[i]).is_epsilon()) {
      throw Error("inadmissible coefficient: A(" + std::to_string(i + 1) + "," + std::to_string(g[i] + 1) + ") is ε");
    }
    dyn.offsets[i] = a(i, g[i]).value();
  }
  dyn.g = std::move(g);
  return dyn;
}

AffineDynamics AffineDynamics::identity(std::size_t n) {
  AffineDynamics dyn;
  dyn.g.resize(n);
  dyn.offsets.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) dyn.g[i] = i;
  return dyn;
}

Point AffineDynamics::apply(std::span<const Ticks> x) const {
  if (x.size() != g.size()) throw Error("point dimension does not match dynamics");
  Point y(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) y[i] = checked_add(x[g[i]], offsets[i]);
  return y;
}

Dbm image(const Dbm& d, const AffineDynamics& dyn) {
  if (!d.is_canonical()) throw InternalError("image() needs a canonical DBM");
  const std::size_t n = dyn.dim();
  Dbm r = Dbm::universe(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      r.constrain(i, j, d.at(dyn.g[i], dyn.g[j]).shifted(checked_sub(dyn.offsets[i], dyn.offsets[j])));
    }
  }
  auto closed = canonicalize(std::move(r));
  if (!closed) throw InternalError("image of a non-empty DBM came out empty");
  return *closed;
}

MaybeDbm preimage(const Dbm& d, const AffineDynamics& dyn) {
  const std::size_t n = dyn.dim();
  Dbm r = Dbm::universe(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || d.at(i, j).is_infinite()) continue;
      // x'_i - x'_j = x_{g_i} - x_{g_j} + offsets_i - offsets_j
      const Bound bound = d.at(i, j).shifted(checked_sub(dyn.offsets[j], dyn.offsets[i]));
      if (dyn.g[i] == dyn.g[j]) {
        if (bound < Bound::le(0)) return std::nullopt;
        continue;
      }
      r.constrain(dyn.g[i], dyn.g[j], bound);
    }
  }
  return canonicalize(std::move(r));
}

std::string dump(const Dbm& d, Scale scale) {
  std::ostringstream out;
  for (std::size_t i = 0; i < d.dim(); ++i) {
    for (std::size_t j = 0; j < d.dim(); ++j) {
      const Bound& b = d.at(i, j);
      if (i == j || b.is_infinite()) continue;
      out << "x" << i + 1 << " - x" << j + 1 << (b.is_strict() ? " < " : " <= ") << format_fixed(b.value(), scale)
          << "\n";
    }
  }
  return out.str();
}

std::string describe(const Dbm& d, Scale scale) {
  std::vector<std::string> parts;
  for (std::size_t i = 0; i < d.dim(); ++i) {
    for (std::size_t j = i + 1; j < d.dim(); ++j) {
      const Bound& upper = d.at(i, j);
      const Bound& lower = d.at(j, i);  // x_j - x_i <= v  <=>  x_i - x_j >= -v
      const std::string diff = "x" + std::to_string(i + 1) + " - x" + std::to_string(j + 1);
      if (upper.is_infinite() && lower.is_infinite()) continue;
      if (!upper.is_infinite() && !lower.is_infinite() && !upper.is_strict() && !lower.is_strict() &&
          upper.value() == -lower.value()) {
        parts.push_back(diff + " = " + format_fixed(upper.value(), scale));
        continue;
      }
      std::string s;
      if (!lower.is_infinite()) s += format_fixed(-lower.value(), scale) + (lower.is_strict() ? " < " : " <= ");
      s += diff;
      if (!upper.is_infinite()) s += (upper.is_strict() ? " < " : " <= ") + format_fixed(upper.value(), scale);
      parts.push_back(s);
    }
  }
  if (parts.empty()) return "true";
  std::string out = parts.front();
  for (std::size_t k = 1; k < parts.size(); ++k) out += " & " + parts[k];
  return out;
}

namespace {

struct Range {
  std::optional<Ticks> lo, hi;  // inclusive integer range of admissible ticks
};

// Admissible integer values of x_k - x_ref under a canonical DBM.
Range coordinate_range(const Dbm& d, std::size_t k, std::size_t ref) {
  Range r;
  const Bound& below = d.at(ref, k);  // x_ref - x_k <= v  =>  x_k - x_ref >= -v
  const Bound& above = d.at(k, ref);
  if (!below.is_infinite()) r.lo = -below.value() + (below.is_strict() ? 1 : 0);
  if (!above.is_infinite()) r.hi = above.value() - (above.is_strict() ? 1 : 0);
  return r;
}

bool fix_coordinate(Dbm& d, std::size_t k, std::size_t ref, Ticks v) {
  d.constrain(k, ref, Bound::le(v));
  d.constrain(ref, k, Bound::le(-v));
  auto closed = canonicalize(d);
  if (!closed) return false;
  d = *closed;
  return true;
}

Point shifted_to_reference(const Dbm& fixed, std::size_t ref) {
  Point x(fixed.dim(), 0);
  for (std::size_t k = 0; k < fixed.dim(); ++k) {
    if (k != ref) x[k] = fixed.at(k, ref).value();
  }
  return x;
}

}  // namespace

std::optional<Point> pick_point(const Dbm& d) {
  if (!d.is_canonical()) throw InternalError("pick_point() needs a canonical DBM");
  const std::size_t n = d.dim();
  if (n == 0) return Point{};
  constexpr Ticks kPad = 1'000'000;
  const std::size_t ref = n - 1;
  Dbm work = d;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const Range r = coordinate_range(work, k, ref);
    if (r.lo && r.hi && *r.lo > *r.hi) return std::nullopt;
    Ticks v = 0;
    if (r.lo && r.hi) {
      v = *r.lo + (*r.hi - *r.lo) / 2;
    } else if (r.lo) {
      // Smallest multiple of kPad that is admissible, or 0 when 0 is.
      v = *r.lo <= 0 ? 0 : ((*r.lo + kPad - 1) / kPad) * kPad;
    } else if (r.hi) {
      v = *r.hi >= 0 ? 0 : -((-*r.hi + kPad - 1) / kPad) * kPad;
    }
    if (!fix_coordinate(work, k, ref, v)) throw InternalError("point extraction left the DBM");
  }
  return shifted_to_reference(work, ref);
}

std::optional<Point> sample_point(const Dbm& d, std::mt19937_64& rng, Ticks span) {
  if (!d.is_canonical()) throw InternalError("sample_point() needs a canonical DBM");
  const std::size_t n = d.dim();
  if (n == 0) return Point{};
  const std::size_t ref = n - 1;
  auto clip = [span](const Range& r) {
    Ticks lo = r.lo ? *r.lo : (r.hi ? std::min(-span, *r.hi - 2 * span) : -span);
    Ticks hi = r.hi ? *r.hi : (r.lo ? std::max(span, *r.lo + 2 * span) : span);
    return std::pair<Ticks, Ticks>{lo, hi};
  };

  // Rejection sampling from the bounding box of x_k - x_ref.
  std::vector<std::pair<Ticks, Ticks>> box(n, {0, 0});
  for (std::size_t k = 0; k + 1 < n; ++k) {
    box[k] = clip(coordinate_range(d, k, ref));
    if (box[k].first > box[k].second) return std::nullopt;
  }
  for (int attempt = 0; attempt < 64; ++attempt) {
    Point x(n, 0);
    for (std::size_t k = 0; k + 1 < n; ++k) {
      x[k] = std::uniform_int_distribution<Ticks>(box[k].first, box[k].second)(rng);
    }
    if (contains(d, x)) return x;
  }

  // Thin sets: fix coordinates one at a time.
  Dbm work = d;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const auto [lo, hi] = clip(coordinate_range(work, k, ref));
    if (lo > hi) return std::nullopt;
    const Ticks v = std::uniform_int_distribution<Ticks>(lo, hi)(rng);
    if (!fix_coordinate(work, k, ref, v)) throw InternalError("coordinate sampling left the DBM");
  }
  return shifted_to_reference(work, ref);
}

}  // namespace mplv
