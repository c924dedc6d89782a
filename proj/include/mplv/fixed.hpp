#pragma once

// Exact decimal arithmetic on scaled 64-bit integers ("ticks").
//
// Every finite quantity handled by the library (matrix entries, predicate
// constants, DBM bounds, coordinates) is stored as an integer number of
// ticks. The scale only matters when converting from and to text.

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mplv/error.hpp"

namespace mplv {

using Ticks = std::int64_t;

// A concrete point of R^n, coordinates in ticks.
using Point = std::vector<Ticks>;

struct Scale {
  Ticks ticks_per_unit = 1'000'000;

  // Number of decimal places representable at this scale. Throws if the
  // scale is not a positive power of ten.
  int decimals() const;
};

Ticks parse_fixed(std::string_view text, Scale scale = {});
std::string format_fixed(Ticks value, Scale scale = {});
Ticks to_ticks(double units, Scale scale = {});
double to_units(Ticks value, Scale scale = {});

Ticks checked_add(Ticks a, Ticks b);
Ticks checked_sub(Ticks a, Ticks b);
Ticks checked_mul(Ticks a, Ticks b);

// Exact ratio of two tick counts; used for cycle means. Always normalized
// with a positive denominator.
class Rational {
 public:
  Rational() = default;
  Rational(Ticks num, Ticks den);

  Ticks num() const { return num_; }
  Ticks den() const { return den_; }
  bool is_integer() const { return den_ == 1; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  std::string to_string(Scale scale = {}) const;

 private:
  Ticks num_ = 0;
  Ticks den_ = 1;
};

}  // namespace mplv
