#include "mplv/fixed.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <sstream>

namespace mplv {

int Scale::decimals() const {
  if (ticks_per_unit <= 0) throw Error("scale must be positive");
  int digits = 0;
  Ticks t = ticks_per_unit;
  while (t % 10 == 0) {
    t /= 10;
    ++digits;
  }
  if (t != 1) throw Error("scale must be a power of ten");
  return digits;
}

Ticks checked_add(Ticks a, Ticks b) {
  Ticks r;
  if (__builtin_add_overflow(a, b, &r)) throw Error("arithmetic overflow in tick addition");
  return r;
}

Ticks checked_sub(Ticks a, Ticks b) {
  Ticks r;
  if (__builtin_sub_overflow(a, b, &r)) throw Error("arithmetic overflow in tick subtraction");
  return r;
}

Ticks checked_mul(Ticks a, Ticks b) {
  Ticks r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error("arithmetic overflow in tick multiplication");
  return r;
}

Ticks parse_fixed(std::string_view text, Scale scale) {
  const int decimals = scale.decimals();
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
    negative = text[pos] == '-';
    ++pos;
  }
  auto is_digit = [&](std::size_t p) { return p < text.size() && std::isdigit(static_cast<unsigned char>(text[p])); };
  std::string digits;  // mantissa without the point
  long point = 0;      // digits before the point
  while (is_digit(pos)) digits += text[pos++];
  point = static_cast<long>(digits.size());
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (is_digit(pos)) digits += text[pos++];
  }
  if (digits.empty()) throw ParseError("expected a number in '" + std::string(text) + "'", 0);
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    bool exp_negative = false;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) exp_negative = text[pos++] == '-';
    long exponent = 0;
    if (!is_digit(pos)) throw ParseError("malformed exponent", pos);
    while (is_digit(pos)) {
      exponent = exponent * 10 + (text[pos++] - '0');
      if (exponent > 40) throw ParseError("exponent out of range", pos);
    }
    point += exp_negative ? -exponent : exponent;
  }
  if (pos != text.size()) throw ParseError("trailing characters in number '" + std::string(text) + "'", pos);

  // value = 0.digits * 10^point; keep `decimals` places after the point
  Ticks v = 0;
  const long last = point + decimals;  // digits[0..last) are representable
  for (long k = 0; k < std::max<long>(last, static_cast<long>(digits.size())); ++k) {
    const int d = k < static_cast<long>(digits.size()) ? digits[static_cast<std::size_t>(k)] - '0' : 0;
    if (k >= last) {
      if (d != 0) {
        throw ParseError("number '" + std::string(text) + "' has more decimal places than the scale allows", 0);
      }
      continue;
    }
    v = checked_add(checked_mul(v, 10), d);
  }
  return negative ? -v : v;
}

std::string format_fixed(Ticks value, Scale scale) {
  const int decimals = scale.decimals();
  const bool negative = value < 0;
  // Work on the unsigned magnitude so INT64_MIN does not overflow.
  const auto mag = negative ? static_cast<std::uint64_t>(0) - static_cast<std::uint64_t>(value)
                            : static_cast<std::uint64_t>(value);
  const auto unit = static_cast<std::uint64_t>(scale.ticks_per_unit);
  std::string out = negative ? "-" : "";
  out += std::to_string(mag / unit);
  std::uint64_t frac = mag % unit;
  if (frac != 0) {
    std::string f = std::to_string(frac);
    f.insert(0, static_cast<std::size_t>(decimals) - f.size(), '0');
    while (!f.empty() && f.back() == '0') f.pop_back();
    out += "." + f;
  }
  return out;
}

Ticks to_ticks(double units, Scale scale) {
  const double t = std::round(units * static_cast<double>(scale.ticks_per_unit));
  if (!std::isfinite(t) || std::fabs(t) > 9.0e18) throw Error("value out of range for tick representation");
  return static_cast<Ticks>(t);
}

double to_units(Ticks value, Scale scale) {
  return static_cast<double>(value) / static_cast<double>(scale.ticks_per_unit);
}

Rational::Rational(Ticks num, Ticks den) : num_(num), den_(den) {
  if (den_ == 0) throw Error("rational with zero denominator");
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  const Ticks g = std::gcd(num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
  const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Rational::to_string(Scale scale) const {
  if (den_ == 1) return format_fixed(num_, scale);
  return format_fixed(num_, scale) + "/" + std::to_string(den_);
}

}  // namespace mplv
