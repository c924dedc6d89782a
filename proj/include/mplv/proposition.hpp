#pragma once

#include <compare>
#include <cstddef>
#include <string>

#include "mplv/fixed.hpp"

namespace mplv {

enum class Cmp { Lt, Le, Gt, Ge };

bool compare(Ticks lhs, Cmp op, Ticks rhs);
inline bool is_lower_bound(Cmp op) { return op == Cmp::Gt || op == Cmp::Ge; }
inline bool is_strict(Cmp op) { return op == Cmp::Lt || op == Cmp::Gt; }
std::string to_string(Cmp op);

// `t_i ∼ α`: the time between event k and k+1 of component i, compared to α.
// `index` is 0-based; text forms use 1-based `t<i>`.
struct TimeDiff {
  std::size_t index = 0;
  Cmp op = Cmp::Le;
  Ticks alpha = 0;

  friend bool operator==(const TimeDiff&, const TimeDiff&) = default;
  friend auto operator<=>(const TimeDiff&, const TimeDiff&) = default;

  std::string to_string(Scale scale = {}) const;
};

}  // namespace mplv
